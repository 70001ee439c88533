#pragma once

#include "chainsync/engine/sim_time.hpp"
#include "chainsync/netsim/topology.hpp"

#include <cstdint>
#include <vector>

namespace chainsync::ptp {

struct OffsetRecord {
    SimTime at{};
    netsim::NodeId slave = 0;
    Duration estimated_offset = 0;
    /// Slave clock minus master clock at `at` (simulation oracle).
    Duration true_offset = 0;
    Duration path_delay = 0;
    bool locked = false;
};

struct IntervalMax {
    std::int64_t index = 0;
    Duration max_abs_offset = 0;
};

/// Max |true_offset| per interval; intervals without records are omitted.
/// Records must be sorted by time.
[[nodiscard]] std::vector<IntervalMax> max_offset_series(const std::vector<OffsetRecord>& records, Duration interval);

} // namespace chainsync::ptp
