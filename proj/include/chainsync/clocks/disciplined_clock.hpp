#pragma once

#include "chainsync/engine/rng.hpp"
#include "chainsync/engine/sim_time.hpp"

namespace chainsync::clocks {

/// Free-running oscillator error of one node.
struct OscillatorModel {
    Duration initial_offset = 0;
    double drift_ppm = 0;
    /// Standard deviation of the per-second random-walk step on the ppm term.
    double wander_sigma_ppm = 0;
    /// White noise added to timestamps taken from this clock.
    double jitter_sigma_ns = 0;
};

/// Node clock: an oscillator plus the phase/frequency corrections a servo
/// applies to it.
///
/// Local time is piecewise linear in true time. Segments break at whole
/// seconds when wander is enabled (one random-walk step per second), at the end
/// of a negative-phase slew, and at every correction.
///
/// Reads made through local_now() are "application reads": once one has
/// happened, negative phase steps are no longer applied instantly but slewed at
/// kMaxSlewPpm so that local time never runs backwards. peek() returns the same
/// value without counting as an application read.
class DisciplinedClock {
public:
    static constexpr double kMaxSlewPpm = 500.0;
    static constexpr double kMaxFrequencyCorrectionPpm = 500.0;
    static constexpr double kOscillatorBoundPpm = 1000.0;

    DisciplinedClock() = default;
    explicit DisciplinedClock(OscillatorModel oscillator, LocalTime epoch = 0, RngStream wander = {});

    /// Application read; must not go back in true time.
    LocalTime local_now(SimTime t);

    /// Same value as local_now(t) without marking the clock as read.
    LocalTime peek(SimTime t);

    /// Steps the phase by phase_step (positive immediately; negative immediately
    /// only on a never-read clock, otherwise as a slew that supersedes any slew
    /// still in progress) and sets the absolute frequency correction.
    void apply_correction(SimTime at, Duration phase_step, double freq_adjust_ppm);

    /// Earliest true time at which the clock is expected to read >= target,
    /// extrapolated at the current rate. Callers re-check after waking.
    SimTime true_time_for(LocalTime target, SimTime now);

    /// Local reading minus (epoch + true time).
    Duration error(SimTime t) { return peek(t) - (epoch_ + static_cast<LocalTime>(t.ns())); }

    [[nodiscard]] const OscillatorModel& oscillator() const noexcept { return oscillator_; }
    [[nodiscard]] LocalTime epoch() const noexcept { return epoch_; }
    [[nodiscard]] double frequency_correction_ppm() const noexcept { return frequency_correction_; }
    [[nodiscard]] double wander_ppm() const noexcept { return wander_; }
    /// Rate error relative to true time, including corrections and any slew.
    [[nodiscard]] double effective_ppm() const noexcept;
    [[nodiscard]] Duration phase_correction() const noexcept { return phase_applied_; }
    [[nodiscard]] double pending_slew_ns() const noexcept { return pending_slew_; }
    [[nodiscard]] bool has_been_read() const noexcept { return read_; }
    [[nodiscard]] SimTime last_update() const noexcept { return last_update_; }

private:
    void advance(SimTime t);
    void rebase(SimTime t);
    [[nodiscard]] SimTime next_boundary() const;
    [[nodiscard]] LocalTime value_at(SimTime t) const;

    OscillatorModel oscillator_{};
    LocalTime epoch_ = 0;
    RngStream wander_stream_{};

    SimTime anchor_true_{};
    LocalTime anchor_local_ = 0;
    double anchor_frac_ = 0;

    double wander_ = 0;
    double frequency_correction_ = 0;
    double pending_slew_ = 0;
    Duration phase_applied_ = 0;

    SimTime last_update_{};
    bool read_ = false;
    LocalTime last_read_ = 0;
};

} // namespace chainsync::clocks
