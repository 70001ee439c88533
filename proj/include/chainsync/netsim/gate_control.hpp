#pragma once

#include "chainsync/engine/sim_time.hpp"
#include "chainsync/netsim/frame.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace chainsync::netsim {

struct GateEntry {
    Duration start = 0;
    Duration duration = 0;
    /// Bit p set = gate for priority class p is open.
    std::uint8_t open_mask = 0xFF;

    bool operator==(const GateEntry&) const = default;
};

/// Periodic Qbv schedule evaluated against the owning node's local clock.
///
/// Gaps between entries have every gate closed. Adjacent entries that keep a
/// class open merge into one window, including across the cycle boundary.
class GateControlList {
public:
    static constexpr Duration kForever = std::numeric_limits<Duration>::max();

    GateControlList(Duration cycle, std::vector<GateEntry> entries, LocalTime base_time = 0);

    [[nodiscard]] Duration cycle() const noexcept { return cycle_; }
    [[nodiscard]] LocalTime base_time() const noexcept { return base_time_; }
    [[nodiscard]] const std::vector<GateEntry>& entries() const noexcept { return entries_; }

    /// Position of local time t inside the cycle, in [0, cycle).
    [[nodiscard]] Duration position(LocalTime t) const { return floor_mod(t - base_time_, cycle_); }

    [[nodiscard]] bool is_open(int pcp, LocalTime t) const { return open_remaining(pcp, t) > 0; }

    /// Time until the class's gate closes (0 when closed, kForever when never).
    [[nodiscard]] Duration open_remaining(int pcp, LocalTime t) const;

    /// Delay until the gate is open with at least `need` of window left
    /// (0 if that holds now). nullopt if no window is ever long enough.
    [[nodiscard]] std::optional<Duration> time_until_fits(int pcp, LocalTime t, Duration need) const;

private:
    struct Window {
        Duration start;
        Duration end;
    };

    [[nodiscard]] Duration window_length_from(int pcp, std::size_t index, Duration from) const;

    Duration cycle_;
    LocalTime base_time_;
    std::vector<GateEntry> entries_;
    std::array<std::vector<Window>, kNumClasses> windows_;
    std::array<bool, kNumClasses> always_open_{};
    std::array<bool, kNumClasses> wraps_{};
};

} // namespace chainsync::netsim
