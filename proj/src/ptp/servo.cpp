#include "chainsync/ptp/servo.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace chainsync::ptp {

PiServo::PiServo(ServoConfig config) : config_(config)
{
    if (config_.kp < 0 || config_.ki < 0)
        throw std::invalid_argument("servo gains must be non-negative");
    if (config_.lock_count < 1)
        throw std::invalid_argument("servo lock count must be at least 1");
    if (config_.step_threshold <= 0 || config_.lock_threshold <= 0)
        throw std::invalid_argument("servo thresholds must be positive");
}

ServoOutput PiServo::update(Duration offset, Duration interval)
{
    if (interval <= 0)
        throw std::invalid_argument("servo interval must be positive");
    const Duration magnitude = std::llabs(offset);

    if (locked_ && magnitude > config_.step_threshold) {
        locked_ = false;
        consecutive_ = 0;
        ++lock_losses_;
    }

    if (!locked_ && magnitude > config_.step_threshold) {
        consecutive_ = 0;
        ++steps_;
        return ServoOutput{-offset, -integrator_, true};
    }

    const double y = static_cast<double>(offset) / static_cast<double>(interval) * 1e6;
    integrator_ = std::clamp(integrator_ + config_.ki * y, -config_.integrator_limit_ppm, config_.integrator_limit_ppm);
    const double freq = -(config_.kp * y + integrator_);

    if (magnitude < config_.lock_threshold) {
        if (!locked_ && ++consecutive_ >= config_.lock_count)
            locked_ = true;
    } else if (!locked_) {
        consecutive_ = 0;
    }
    return ServoOutput{0, freq, false};
}

} // namespace chainsync::ptp
