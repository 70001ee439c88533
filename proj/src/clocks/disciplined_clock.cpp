#include "chainsync/clocks/disciplined_clock.hpp"

#include "chainsync/engine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chainsync::clocks {

namespace {

constexpr std::uint64_t kWanderStep = 1'000'000'000ULL;

} // namespace

DisciplinedClock::DisciplinedClock(OscillatorModel oscillator, LocalTime epoch, RngStream wander)
    : oscillator_(oscillator), epoch_(epoch), wander_stream_(std::move(wander))
{
    if (std::abs(oscillator_.drift_ppm) >= kOscillatorBoundPpm)
        throw std::invalid_argument("oscillator drift must stay below 1000 ppm");
    if (oscillator_.wander_sigma_ppm < 0 || oscillator_.jitter_sigma_ns < 0)
        throw std::invalid_argument("oscillator noise parameters must be >= 0");
    anchor_local_ = epoch_ + oscillator_.initial_offset;
}

double DisciplinedClock::effective_ppm() const noexcept
{
    const double slew = pending_slew_ < 0 ? -kMaxSlewPpm : 0.0;
    return oscillator_.drift_ppm + wander_ + frequency_correction_ + slew;
}

SimTime DisciplinedClock::next_boundary() const
{
    std::uint64_t next = std::numeric_limits<std::uint64_t>::max();
    if (oscillator_.wander_sigma_ppm > 0)
        next = (anchor_true_.ns() / kWanderStep + 1) * kWanderStep;
    if (pending_slew_ < 0) {
        const auto needed = static_cast<std::uint64_t>(std::ceil(-pending_slew_ / (kMaxSlewPpm * 1e-6)));
        next = std::min(next, anchor_true_.ns() + std::max<std::uint64_t>(needed, 1));
    }
    return SimTime{next};
}

LocalTime DisciplinedClock::value_at(SimTime t) const
{
    const Duration elapsed = t - anchor_true_;
    const double delta = anchor_frac_ + static_cast<double>(elapsed) * effective_ppm() * 1e-6;
    return anchor_local_ + elapsed + static_cast<LocalTime>(std::floor(delta));
}

void DisciplinedClock::rebase(SimTime t)
{
    const Duration elapsed = t - anchor_true_;
    const double delta = anchor_frac_ + static_cast<double>(elapsed) * effective_ppm() * 1e-6;
    const double whole = std::floor(delta);
    if (pending_slew_ < 0) {
        const double consumed = static_cast<double>(elapsed) * kMaxSlewPpm * 1e-6;
        const double before = pending_slew_;
        pending_slew_ = std::min(0.0, pending_slew_ + consumed);
        phase_applied_ += static_cast<Duration>(std::llround(pending_slew_ - before));
    }
    anchor_local_ += elapsed + static_cast<LocalTime>(whole);
    anchor_frac_ = delta - whole;
    anchor_true_ = t;
}

void DisciplinedClock::advance(SimTime t)
{
    if (t < last_update_) {
        throw ContractViolation("clock read at " + std::to_string(t.ns()) + " precedes last update " +
                                std::to_string(last_update_.ns()));
    }
    last_update_ = t;
    for (SimTime b = next_boundary(); b <= t; b = next_boundary()) {
        const bool slew_ends = pending_slew_ < 0;
        rebase(b);
        if (slew_ends && pending_slew_ > -1e-3)
            pending_slew_ = 0;
        if (oscillator_.wander_sigma_ppm > 0 && b.ns() % kWanderStep == 0) {
            wander_ += oscillator_.wander_sigma_ppm * wander_stream_.standard_normal();
            const double bound = kOscillatorBoundPpm - 1.0;
            wander_ = std::clamp(oscillator_.drift_ppm + wander_, -bound, bound) - oscillator_.drift_ppm;
        }
    }
}

LocalTime DisciplinedClock::peek(SimTime t)
{
    advance(t);
    return value_at(t);
}

LocalTime DisciplinedClock::local_now(SimTime t)
{
    const LocalTime v = peek(t);
    if (read_ && v < last_read_) {
        throw InvariantViolation("clock-monotonic", "local time went from " + std::to_string(last_read_) + " to " +
                                                        std::to_string(v));
    }
    read_ = true;
    last_read_ = v;
    return v;
}

void DisciplinedClock::apply_correction(SimTime at, Duration phase_step, double freq_adjust_ppm)
{
    advance(at);
    rebase(at);
    frequency_correction_ = std::clamp(freq_adjust_ppm, -kMaxFrequencyCorrectionPpm, kMaxFrequencyCorrectionPpm);
    if (phase_step > 0 || (phase_step < 0 && !read_)) {
        anchor_local_ += phase_step;
        phase_applied_ += phase_step;
        pending_slew_ = 0;
    } else if (phase_step < 0) {
        pending_slew_ = static_cast<double>(phase_step);
    }
}

SimTime DisciplinedClock::true_time_for(LocalTime target, SimTime now)
{
    const LocalTime current = peek(now);
    if (current >= target)
        return now;
    const double rate = 1.0 + effective_ppm() * 1e-6;
    const auto dt = static_cast<Duration>(std::ceil(static_cast<double>(target - current) / rate));
    return now + std::max<Duration>(dt, 1);
}

} // namespace chainsync::clocks
