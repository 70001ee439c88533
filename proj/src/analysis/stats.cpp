#include "chainsync/analysis/stats.hpp"

#include <algorithm>
#include <cmath>

namespace chainsync::analysis {

Duration nearest_rank(const std::vector<Duration>& sorted, double q)
{
    if (sorted.empty())
        return 0;
    const auto n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

SummaryStats summarize(std::vector<Duration> values)
{
    SummaryStats s;
    if (values.empty())
        return s;
    std::sort(values.begin(), values.end());
    s.count = values.size();
    s.min = values.front();
    s.max = values.back();
    long double sum = 0;
    for (Duration v : values)
        sum += static_cast<long double>(v);
    const long double mean = sum / static_cast<long double>(s.count);
    long double ss = 0;
    for (Duration v : values) {
        const long double d = static_cast<long double>(v) - mean;
        ss += d * d;
    }
    s.mean = static_cast<double>(mean);
    s.stddev = s.count > 1 ? static_cast<double>(std::sqrt(ss / static_cast<long double>(s.count - 1))) : 0.0;
    s.p50 = nearest_rank(values, 0.50);
    s.p99 = nearest_rank(values, 0.99);
    s.p999 = nearest_rank(values, 0.999);
    return s;
}

Duration Histogram::support_width() const
{
    if (bins.empty())
        return 0;
    return (bins.rbegin()->first - bins.begin()->first + 1) * bin_width;
}

Histogram histogram(const std::vector<Duration>& values, Duration bin_width)
{
    if (bin_width <= 0)
        throw std::invalid_argument("histogram bin width must be positive");
    Histogram h;
    h.bin_width = bin_width;
    for (Duration v : values)
        ++h.bins[floor_div(v, bin_width)];
    h.total = values.size();
    return h;
}

Duration latency(const pubsub::TraceRecord& record, bool synchronized)
{
    if (!synchronized)
        throw LatencyRefused("latency refused: clocks are not synchronized, so t_sub - t_pub mixes two unrelated timebases");
    if (record.dropped)
        throw std::invalid_argument("latency of a dropped message");
    return record.t_sub - record.t_pub;
}

} // namespace chainsync::analysis
