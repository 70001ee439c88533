#pragma once

#include "chainsync/engine/sim_time.hpp"

namespace chainsync::ptp {

struct ServoConfig {
    double kp = 0.7;
    double ki = 0.3;
    /// Unlocked and |offset| above this: step the phase instead of slewing.
    Duration step_threshold = 10 * kMicrosecond;
    Duration lock_threshold = 1 * kMicrosecond;
    int lock_count = 5;
    double integrator_limit_ppm = 100.0;
};

struct ServoOutput {
    Duration phase_step = 0;
    /// Absolute frequency correction to apply, ppm.
    double freq_adjust_ppm = 0;
    bool stepped = false;
};

/// PI clock servo.
///
/// An offset is turned into its rate equivalent y = offset / interval (ppm).
/// The integrator accumulates ki * y (clamped), and the frequency output is
/// -(kp * y + integrator). Phase steps happen only while unlocked.
class PiServo {
public:
    explicit PiServo(ServoConfig config = {});

    ServoOutput update(Duration offset, Duration interval);

    [[nodiscard]] const ServoConfig& config() const noexcept { return config_; }
    [[nodiscard]] double integrator() const noexcept { return integrator_; }
    [[nodiscard]] bool locked() const noexcept { return locked_; }
    [[nodiscard]] int lock_losses() const noexcept { return lock_losses_; }
    [[nodiscard]] int steps() const noexcept { return steps_; }

private:
    ServoConfig config_;
    double integrator_ = 0;
    bool locked_ = false;
    int consecutive_ = 0;
    int lock_losses_ = 0;
    int steps_ = 0;
};

} // namespace chainsync::ptp
