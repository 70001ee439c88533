#include "chainsync/pubsub/timer.hpp"

#include <stdexcept>
#include <string>

namespace chainsync::pubsub {

std::string_view to_string(TimerMode m)
{
    return m == TimerMode::Absolute ? "absolute" : "relative";
}

TimerMode timer_mode_from_string(std::string_view s)
{
    if (s == "relative")
        return TimerMode::Relative;
    if (s == "absolute")
        return TimerMode::Absolute;
    throw std::invalid_argument("unknown timer mode '" + std::string(s) + "' (relative | absolute)");
}

NextFire next_fire(TimerMode mode, Duration period, LocalTime finished_at, Duration phase,
                   std::optional<LocalTime> previous_target)
{
    if (period <= 0)
        throw std::invalid_argument("timer period must be positive");
    if (mode == TimerMode::Relative)
        return {finished_at + period, 0};

    const LocalTime at = (floor_div(finished_at - phase, period) + 1) * period + phase;
    std::int64_t skipped = 0;
    if (previous_target && at > *previous_target + period)
        skipped = (at - *previous_target) / period - 1;
    return {at, skipped};
}

} // namespace chainsync::pubsub
