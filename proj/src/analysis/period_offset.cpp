#include "chainsync/analysis/period_offset.hpp"

#include <algorithm>
#include <stdexcept>

namespace chainsync::analysis {

Duration period_offset(LocalTime ts, Duration period)
{
    if (period <= 0)
        throw std::invalid_argument("period must be positive");
    return floor_mod(ts, period);
}

PeriodOffsetSeries offset_series(const std::vector<pubsub::TraceRecord>& records, const std::string& topic,
                                 Duration period, StampColumn column, SimTime from)
{
    PeriodOffsetSeries s{topic, period, {}};
    for (const auto& r : records) {
        if (r.topic != topic || r.true_send < from)
            continue;
        if (column == StampColumn::Sub && r.dropped)
            continue;
        const LocalTime ts = column == StampColumn::Pub ? r.t_pub : r.t_sub;
        s.samples.push_back({static_cast<std::int64_t>(r.seq), period_offset(ts, period)});
    }
    std::stable_sort(s.samples.begin(), s.samples.end(),
                     [](const OffsetSample& a, const OffsetSample& b) { return a.index < b.index; });
    return s;
}

Unwrapped unwrap(const PeriodOffsetSeries& series)
{
    Unwrapped out;
    const Duration p = series.period;
    if (p <= 0)
        throw std::invalid_argument("period must be positive");
    Duration shift = 0;
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        const auto& s = series.samples[i];
        if (i > 0) {
            Duration step = s.offset - series.samples[i - 1].offset;
            // Fold into [-p/2, p/2].
            Duration folded = floor_mod(step + p / 2, p) - p / 2;
            if (2 * std::abs(folded) == p)
                out.ambiguous = true;
            shift += folded - step;
        }
        out.index.push_back(static_cast<double>(s.index));
        out.value.push_back(static_cast<double>(s.offset + shift));
    }
    return out;
}

} // namespace chainsync::analysis
