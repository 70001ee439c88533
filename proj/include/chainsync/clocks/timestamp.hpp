#pragma once

#include "chainsync/clocks/disciplined_clock.hpp"
#include "chainsync/engine/distribution.hpp"

namespace chainsync::clocks {

enum class StampKind { Hardware, Software };

/// Where a timestamp is taken and how noisy it is.
///
/// Hardware stamps come from the NIC clock path: symmetric noise, and they do
/// not count as application reads of the clock. Software stamps happen after
/// scheduling delays, so their noise is one-sided (never negative).
class TimestampModel {
public:
    TimestampModel(StampKind kind, Distribution noise);

    /// normal(0, 50 ns), truncated at 4 sigma.
    static TimestampModel hardware_default();
    static TimestampModel software(Distribution noise) { return {StampKind::Software, noise}; }

    [[nodiscard]] StampKind kind() const noexcept { return kind_; }
    [[nodiscard]] const Distribution& noise() const noexcept { return noise_; }

private:
    StampKind kind_;
    Distribution noise_;
};

struct Stamp {
    LocalTime value = 0;
    Duration noise = 0;
};

/// Clock reading at true_time plus a noise draw from `stream`.
Stamp stamp(const TimestampModel& model, DisciplinedClock& clock, SimTime true_time, RngStream& stream);

} // namespace chainsync::clocks
