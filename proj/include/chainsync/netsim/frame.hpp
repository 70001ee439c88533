#pragma once

#include "chainsync/engine/sim_time.hpp"
#include "chainsync/netsim/topology.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace chainsync::netsim {

/// Ethernet header + FCS.
inline constexpr std::uint32_t kL2Overhead = 18;
/// IPv4 header carried in front of every datagram payload.
inline constexpr std::uint32_t kL3Overhead = 20;
/// Preamble, SFD and inter-packet gap occupying the wire per frame.
inline constexpr std::uint32_t kPreambleAndGap = 20;
inline constexpr std::uint32_t kMinFrameSize = 64;
inline constexpr std::uint32_t kMaxPayload = 1500;
inline constexpr std::uint32_t kMaxFrameSize = kMaxPayload + kL2Overhead + kL3Overhead;
inline constexpr int kNumClasses = 8;

enum class FrameKind : std::uint8_t { Ptp, Topic, Background };

[[nodiscard]] std::string_view to_string(FrameKind kind);

struct HopRecord {
    NodeId node = 0;
    NodeId next = 0;
    SimTime enqueued{};
    std::optional<SimTime> dequeued;
    std::optional<SimTime> arrived;
};

struct Frame {
    std::uint64_t id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    /// On-wire bytes excluding preamble and inter-packet gap.
    std::uint32_t size = kMinFrameSize;
    std::uint8_t pcp = 0;
    FrameKind kind = FrameKind::Background;
    SimTime created{};
    std::vector<HopRecord> hops;

    /// Serialization starts at the source port (hardware egress timestamp point).
    std::function<void(const Frame&, SimTime)> on_source_egress;
    /// Frame fully received by its destination.
    std::function<void(const Frame&, SimTime)> on_delivered;
    std::function<void(const Frame&, NodeId)> on_dropped;
};

/// On-wire frame size for a datagram payload, padded to the Ethernet minimum.
/// Payloads above one MTU are rejected (no fragmentation).
[[nodiscard]] std::uint32_t frame_size_for_payload(std::uint32_t payload);

/// (size + preamble/IPG) * 8 / rate, rounded up to whole nanoseconds.
[[nodiscard]] Duration wire_time(std::uint32_t frame_size, std::uint64_t rate_bps);

} // namespace chainsync::netsim
