#pragma once

#include "chainsync/engine/distribution.hpp"
#include "chainsync/engine/sim_time.hpp"

namespace chainsync::pubsub {

/// Middleware stack latencies, all one-sided, in ns.
struct StackModel {
    /// t_PUB stamp -> frame queued at the NIC.
    Distribution publish_latency = Distribution::lognormal(150 * kMicrosecond, 0.3, 400 * kMicrosecond);
    /// Frame delivered -> subscription callback entry (t_SUB stamp).
    Distribution subscribe_latency = Distribution::lognormal(1100 * kMicrosecond, 0.12, 1600 * kMicrosecond);
    /// Noise of software timestamps taken by the application.
    Distribution stamp_noise = Distribution::lognormal(15 * kMicrosecond, 0.45, 60 * kMicrosecond);

    bool operator==(const StackModel&) const = default;
};

} // namespace chainsync::pubsub
