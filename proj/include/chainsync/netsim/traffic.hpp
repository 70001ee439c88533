#pragma once

#include "chainsync/netsim/network.hpp"

#include <cstdint>
#include <string>

namespace chainsync::netsim {

enum class TrafficPattern { SaturatingPeriodic, Poisson };

[[nodiscard]] std::string_view to_string(TrafficPattern p);
[[nodiscard]] TrafficPattern traffic_pattern_from_string(std::string_view s);

struct TrafficGenerator {
    std::string name;
    NodeId src = 0;
    NodeId dst = 0;
    /// Fraction of the first-hop link rate, in [0, 1].
    double load = 0.9;
    /// Datagram payload; the frame on the wire is payload + headers.
    std::uint32_t frame_size = 1500;
    TrafficPattern pattern = TrafficPattern::SaturatingPeriodic;
    std::uint8_t pcp = 0;
};

/// Mean inter-departure gap: wire time of one frame divided by the load.
[[nodiscard]] double mean_gap_ns(const TrafficGenerator& gen, std::uint64_t rate_bps);

/// Background frame source bound to a network. Periodic departures are placed
/// at start + round(k * gap) so the long-run load is exact.
class TrafficSource {
public:
    TrafficSource(Network& network, TrafficGenerator gen, RngStream stream);

    void start(SimTime at);

    [[nodiscard]] const TrafficGenerator& config() const noexcept { return gen_; }
    [[nodiscard]] std::uint64_t frames_sent() const noexcept { return sent_; }

private:
    void emit();
    void schedule_next();

    Network& network_;
    TrafficGenerator gen_;
    RngStream stream_;
    std::uint32_t wire_size_ = 0;
    double gap_ = 0;
    SimTime origin_{};
    double poisson_clock_ = 0;
    std::uint64_t sent_ = 0;
};

} // namespace chainsync::netsim
