#pragma once

#include "chainsync/pubsub/trace.hpp"

#include <string>
#include <vector>

namespace chainsync::analysis {

/// ts mod period with floored modulo: always in [0, period).
[[nodiscard]] Duration period_offset(LocalTime ts, Duration period);

struct OffsetSample {
    std::int64_t index = 0;
    Duration offset = 0;
};

/// Offsets of one timestamp column (t_PUB or t_SUB) relative to the start of
/// each period, indexed by message sequence number.
struct PeriodOffsetSeries {
    std::string topic;
    Duration period = 0;
    std::vector<OffsetSample> samples;
};

enum class StampColumn { Pub, Sub };

/// Series for `topic`, sorted by seq. Dropped messages are skipped for the
/// Sub column. Records before `from` (true send time) are ignored.
[[nodiscard]] PeriodOffsetSeries offset_series(const std::vector<pubsub::TraceRecord>& records, const std::string& topic,
                                               Duration period, StampColumn column, SimTime from = SimTime{});

struct Unwrapped {
    std::vector<double> index;
    std::vector<double> value;
    /// Some step was exactly half a period, so its direction is a guess.
    bool ambiguous = false;
};

/// Removes modulo wrap-arounds: each step is replaced by the equivalent step
/// of magnitude <= period / 2.
[[nodiscard]] Unwrapped unwrap(const PeriodOffsetSeries& series);

} // namespace chainsync::analysis
