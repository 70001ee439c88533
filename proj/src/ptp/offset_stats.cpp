#include "chainsync/ptp/offset_stats.hpp"

#include <cstdlib>
#include <stdexcept>

namespace chainsync::ptp {

std::vector<IntervalMax> max_offset_series(const std::vector<OffsetRecord>& records, Duration interval)
{
    if (interval <= 0)
        throw std::invalid_argument("interval must be positive");
    std::vector<IntervalMax> out;
    SimTime prev{};
    for (const auto& r : records) {
        if (r.at < prev)
            throw std::invalid_argument("offset records must be sorted by time");
        prev = r.at;
        const auto index = static_cast<std::int64_t>(r.at.ns() / static_cast<std::uint64_t>(interval));
        const Duration mag = std::llabs(r.true_offset);
        if (out.empty() || out.back().index != index)
            out.push_back({index, mag});
        else if (mag > out.back().max_abs_offset)
            out.back().max_abs_offset = mag;
    }
    return out;
}

} // namespace chainsync::ptp
