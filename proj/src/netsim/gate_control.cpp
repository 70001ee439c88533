#include "chainsync/netsim/gate_control.hpp"

#include <algorithm>
#include <stdexcept>

namespace chainsync::netsim {

GateControlList::GateControlList(Duration cycle, std::vector<GateEntry> entries, LocalTime base_time)
    : cycle_(cycle), base_time_(base_time), entries_(std::move(entries))
{
    if (cycle_ <= 0)
        throw std::invalid_argument("gate cycle time must be positive");
    if (entries_.empty())
        throw std::invalid_argument("gate control list needs at least one entry");

    std::sort(entries_.begin(), entries_.end(), [](const GateEntry& a, const GateEntry& b) { return a.start < b.start; });
    Duration prev_end = 0;
    for (const auto& e : entries_) {
        if (e.start < 0 || e.duration <= 0 || e.start + e.duration > cycle_)
            throw std::invalid_argument("gate entry must lie inside [0, cycle) with positive duration");
        if (e.start < prev_end)
            throw std::invalid_argument("gate entries overlap");
        prev_end = e.start + e.duration;
    }

    for (int pcp = 0; pcp < kNumClasses; ++pcp) {
        auto& ws = windows_[pcp];
        for (const auto& e : entries_) {
            if ((e.open_mask & (1U << pcp)) == 0)
                continue;
            if (!ws.empty() && ws.back().end == e.start)
                ws.back().end = e.start + e.duration;
            else
                ws.push_back(Window{e.start, e.start + e.duration});
        }
        always_open_[pcp] = ws.size() == 1 && ws.front().start == 0 && ws.front().end == cycle_;
        wraps_[pcp] = !always_open_[pcp] && !ws.empty() && ws.front().start == 0 && ws.back().end == cycle_;
    }
}

Duration GateControlList::window_length_from(int pcp, std::size_t index, Duration from) const
{
    const auto& ws = windows_[pcp];
    Duration len = ws[index].end - from;
    if (wraps_[pcp] && ws[index].end == cycle_)
        len += ws.front().end;
    return len;
}

Duration GateControlList::open_remaining(int pcp, LocalTime t) const
{
    if (pcp < 0 || pcp >= kNumClasses)
        throw std::out_of_range("priority class out of range");
    if (always_open_[pcp])
        return kForever;
    const Duration pos = position(t);
    const auto& ws = windows_[pcp];
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (pos >= ws[i].start && pos < ws[i].end)
            return window_length_from(pcp, i, pos);
    }
    return 0;
}

std::optional<Duration> GateControlList::time_until_fits(int pcp, LocalTime t, Duration need) const
{
    if (open_remaining(pcp, t) >= need)
        return Duration{0};
    const Duration pos = position(t);
    const auto& ws = windows_[pcp];
    for (int k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < ws.size(); ++i) {
            const Duration start = k * cycle_ + ws[i].start;
            if (start <= pos)
                continue;
            if (window_length_from(pcp, i, ws[i].start) >= need)
                return start - pos;
        }
    }
    return std::nullopt;
}

} // namespace chainsync::netsim
