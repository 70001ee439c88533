#pragma once

#include "chainsync/clocks/disciplined_clock.hpp"
#include "chainsync/engine/engine.hpp"
#include "chainsync/netsim/frame.hpp"
#include "chainsync/netsim/gate_control.hpp"

#include <array>
#include <deque>
#include <memory>
#include <optional>

namespace chainsync::netsim {

/// Eight FIFO queues (one per PCP) in front of one outgoing link.
///
/// Selection is strict priority and non-preemptive. With a gate control list
/// a class is eligible only while its gate is open and the head frame's whole
/// serialization fits before the gate closes.
class EgressPort {
public:
    EgressPort(NodeId owner, NodeId peer, Link link, std::size_t capacity);

    [[nodiscard]] NodeId owner() const noexcept { return owner_; }
    [[nodiscard]] NodeId peer() const noexcept { return peer_; }
    [[nodiscard]] const Link& link() const noexcept { return link_; }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

    /// Clock used to evaluate the gate schedule; without one, local == true time.
    void set_clock(clocks::DisciplinedClock* clock) noexcept { clock_ = clock; }
    void set_gate_control(std::optional<GateControlList> gcl) { gcl_ = std::move(gcl); }
    [[nodiscard]] const std::optional<GateControlList>& gate_control() const noexcept { return gcl_; }

    /// Tail drop: returns false (frame not queued) when the class queue is full.
    bool enqueue(std::shared_ptr<Frame> frame);

    /// Head frame of the class that would transmit now, or nullptr.
    /// Precondition: the port is idle.
    [[nodiscard]] const Frame* select_next(SimTime now) const;

    std::shared_ptr<Frame> pop(int pcp);

    /// Delay until some queued frame becomes eligible under the gate schedule.
    [[nodiscard]] std::optional<Duration> time_until_eligible(SimTime now) const;

    /// Serialization time of `frame` on this link, expressed in local clock units.
    [[nodiscard]] Duration local_wire_time(const Frame& frame) const;

    [[nodiscard]] Duration wire_time_of(const Frame& frame) const { return wire_time(frame.size, link_.rate_bps); }

    [[nodiscard]] bool idle(SimTime now) const noexcept { return now >= busy_until_; }
    [[nodiscard]] SimTime busy_until() const noexcept { return busy_until_; }
    void set_busy_until(SimTime t) noexcept { busy_until_ = t; }

    [[nodiscard]] std::size_t depth(int pcp) const { return queues_.at(pcp).size(); }
    [[nodiscard]] bool empty() const;
    [[nodiscard]] const std::deque<std::shared_ptr<Frame>>& queue(int pcp) const { return queues_.at(pcp); }

    /// Frame currently on the wire (nullptr when idle).
    [[nodiscard]] const Frame* in_flight() const noexcept { return in_flight_.get(); }
    void set_in_flight(std::shared_ptr<Frame> f) noexcept { in_flight_ = std::move(f); }

    [[nodiscard]] LocalTime local_time(SimTime now) const;

    std::optional<EventHandle> wake;

private:
    NodeId owner_;
    NodeId peer_;
    Link link_;
    std::size_t capacity_;
    clocks::DisciplinedClock* clock_ = nullptr;
    std::optional<GateControlList> gcl_;
    std::array<std::deque<std::shared_ptr<Frame>>, kNumClasses> queues_;
    SimTime busy_until_{};
    std::shared_ptr<Frame> in_flight_;
};

} // namespace chainsync::netsim
