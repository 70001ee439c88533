#pragma once

#include "chainsync/pubsub/trace.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace chainsync::analysis {

struct SummaryStats {
    std::size_t count = 0;
    Duration min = 0;
    double mean = 0;
    Duration max = 0;
    /// Sample standard deviation (n - 1).
    double stddev = 0;
    Duration p50 = 0;
    Duration p99 = 0;
    Duration p999 = 0;
};

/// Nearest-rank percentile of a sorted sample: element ceil(q * n) (1-based).
[[nodiscard]] Duration nearest_rank(const std::vector<Duration>& sorted, double q);

/// All-zero stats for an empty input.
[[nodiscard]] SummaryStats summarize(std::vector<Duration> values);

struct Histogram {
    Duration bin_width = 1;
    std::map<std::int64_t, std::uint64_t> bins;
    std::uint64_t total = 0;

    /// (max bin - min bin + 1) * bin_width; 0 when empty.
    [[nodiscard]] Duration support_width() const;
};

/// Value v lands in bin floor(v / bin_width).
[[nodiscard]] Histogram histogram(const std::vector<Duration>& values, Duration bin_width);

class LatencyRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// t_sub - t_pub. Only meaningful when both clocks are synchronized;
/// otherwise throws LatencyRefused.
[[nodiscard]] Duration latency(const pubsub::TraceRecord& record, bool synchronized);

} // namespace chainsync::analysis
