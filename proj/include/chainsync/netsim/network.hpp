#pragma once

#include "chainsync/clocks/disciplined_clock.hpp"
#include "chainsync/engine/engine.hpp"
#include "chainsync/netsim/egress_port.hpp"
#include "chainsync/netsim/frame.hpp"
#include "chainsync/netsim/topology.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

namespace chainsync::netsim {

struct NetworkConfig {
    std::size_t queue_capacity = 256;
    /// Keep per-hop records of every finished frame for the frame trace CSV.
    bool frame_trace = false;
};

struct ClassCounters {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_delivered = 0;
};

struct DropRecord {
    std::uint64_t frame_id = 0;
    FrameKind kind = FrameKind::Background;
    std::uint8_t pcp = 0;
    NodeId hop = 0;
    SimTime at{};
};

/// Ethernet model over a topology: per-link egress ports, store-and-forward
/// bridges, serialization + propagation, tail drop.
class Network {
public:
    using TransmitObserver = std::function<void(const EgressPort&, const Frame&, SimTime start)>;

    Network(Engine& engine, Topology topology, NetworkConfig config = {});

    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;

    [[nodiscard]] const Topology& topology() const noexcept { return topology_; }
    [[nodiscard]] Engine& engine() noexcept { return engine_; }

    /// Ports of `node` evaluate gate schedules against this clock.
    void attach_clock(NodeId node, clocks::DisciplinedClock* clock);

    void set_gate_control(NodeId node, NodeId toward, GateControlList gcl);

    /// Injects a frame at frame.src. Returns the assigned frame id.
    std::uint64_t send(Frame frame);

    [[nodiscard]] EgressPort& port(NodeId node, NodeId toward);
    [[nodiscard]] const EgressPort& port(NodeId node, NodeId toward) const;

    /// First hop from `from` toward `to`.
    [[nodiscard]] NodeId next_hop(NodeId from, NodeId to) const;

    [[nodiscard]] const std::array<ClassCounters, kNumClasses>& counters() const noexcept { return counters_; }
    [[nodiscard]] std::uint64_t frames_in_network(int pcp) const { return live_.at(pcp); }
    [[nodiscard]] const std::vector<DropRecord>& drops() const noexcept { return drops_; }
    [[nodiscard]] std::uint64_t gated_transmissions() const noexcept { return gated_transmissions_; }

    /// sent == delivered + dropped + in-network for every class; throws
    /// InvariantViolation otherwise.
    void check_conservation() const;

    void set_transmit_observer(TransmitObserver obs) { observer_ = std::move(obs); }

    /// frame_id,kind,pcp,hop,node,next,enqueue_ns,dequeue_ns,arrive_ns (-1 = never)
    void write_frame_trace(std::ostream& out) const;

private:
    void enqueue_at(NodeId node, std::shared_ptr<Frame> frame);
    void try_transmit(EgressPort& port);
    void on_transmit_end(EgressPort& port);
    void arrive(NodeId node, std::shared_ptr<Frame> frame);
    void deliver(const std::shared_ptr<Frame>& frame);
    void drop(const std::shared_ptr<Frame>& frame, NodeId hop);
    void schedule_wake(EgressPort& port);
    void finish(const std::shared_ptr<Frame>& frame);

    Engine& engine_;
    Topology topology_;
    NetworkConfig config_;
    std::map<std::pair<NodeId, NodeId>, std::unique_ptr<EgressPort>> ports_;
    std::vector<std::vector<NodeId>> next_hop_;
    std::vector<clocks::DisciplinedClock*> clocks_;
    std::array<ClassCounters, kNumClasses> counters_{};
    std::array<std::uint64_t, kNumClasses> live_{};
    std::vector<DropRecord> drops_;
    std::vector<Frame> finished_;
    std::uint64_t next_frame_id_ = 1;
    std::uint64_t gated_transmissions_ = 0;
    TransmitObserver observer_;
};

} // namespace chainsync::netsim
