#pragma once

#include "chainsync/engine/sim_time.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace chainsync::pubsub {

enum class TimerMode { Relative, Absolute };

[[nodiscard]] std::string_view to_string(TimerMode m);
[[nodiscard]] TimerMode timer_mode_from_string(std::string_view s);

struct NextFire {
    LocalTime at = 0;
    /// Absolute mode only: boundaries passed without firing.
    std::int64_t skipped = 0;
};

/// Relative: finished_at + period. Absolute: the smallest phase + k * period
/// strictly greater than finished_at. `previous_target` (absolute mode) is
/// the boundary the finished cycle was meant for; any boundary between it and
/// the returned one is counted as skipped.
[[nodiscard]] NextFire next_fire(TimerMode mode, Duration period, LocalTime finished_at, Duration phase = 0,
                                 std::optional<LocalTime> previous_target = std::nullopt);

} // namespace chainsync::pubsub
