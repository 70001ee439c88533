#pragma once

#include "chainsync/engine/sim_time.hpp"

#include <optional>

namespace chainsync::ptp {

/// The four timestamps of one two-step sync + delay request exchange.
/// t1/t4 are in the master timebase, t2/t3 in the slave's.
struct SyncSample {
    std::optional<LocalTime> t1;
    std::optional<LocalTime> t2;
    std::optional<LocalTime> t3;
    std::optional<LocalTime> t4;

    [[nodiscard]] bool complete() const noexcept { return t1 && t2 && t3 && t4; }
};

struct OffsetDelay {
    /// Slave minus master.
    Duration offset = 0;
    Duration mean_path_delay = 0;
};

/// offset = ((t2 - t1) - (t4 - t3)) / 2, delay = ((t2 - t1) + (t4 - t3)) / 2,
/// both truncated toward zero. nullopt for an incomplete sample.
[[nodiscard]] std::optional<OffsetDelay> compute_offset_delay(const SyncSample& s);

} // namespace chainsync::ptp
