#include "chainsync/netsim/network.hpp"

#include "chainsync/engine/errors.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace chainsync::netsim {

Network::Network(Engine& engine, Topology topology, NetworkConfig config)
    : engine_(engine), topology_(std::move(topology)), config_(config)
{
    topology_.validate();
    const auto n = topology_.nodes().size();
    clocks_.assign(n, nullptr);
    for (const auto& l : topology_.links()) {
        ports_.emplace(std::pair{l.a, l.b}, std::make_unique<EgressPort>(l.a, l.b, l, config_.queue_capacity));
        ports_.emplace(std::pair{l.b, l.a}, std::make_unique<EgressPort>(l.b, l.a, l, config_.queue_capacity));
    }
    next_hop_.assign(n, std::vector<NodeId>(n, 0));
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = 0; b < n; ++b) {
            const auto path = topology_.route(a, b);
            next_hop_[a][b] = path.size() > 1 ? path[1] : a;
        }
    }
}

void Network::attach_clock(NodeId node, clocks::DisciplinedClock* clock)
{
    clocks_.at(node) = clock;
    for (auto& [key, port] : ports_) {
        if (key.first == node)
            port->set_clock(clock);
    }
}

void Network::set_gate_control(NodeId node, NodeId toward, GateControlList gcl)
{
    port(node, toward).set_gate_control(std::move(gcl));
}

EgressPort& Network::port(NodeId node, NodeId toward)
{
    auto it = ports_.find({node, toward});
    if (it == ports_.end())
        throw std::invalid_argument("no egress port " + topology_.node(node).name + " -> " + topology_.node(toward).name);
    return *it->second;
}

const EgressPort& Network::port(NodeId node, NodeId toward) const
{
    return const_cast<Network*>(this)->port(node, toward);
}

NodeId Network::next_hop(NodeId from, NodeId to) const
{
    return next_hop_.at(from).at(to);
}

std::uint64_t Network::send(Frame frame)
{
    if (frame.src >= clocks_.size() || frame.dst >= clocks_.size())
        throw std::invalid_argument("frame addressed to unknown node");
    if (frame.pcp >= kNumClasses)
        throw std::invalid_argument("pcp must be in 0..7");
    if (frame.size < kMinFrameSize || frame.size > kMaxFrameSize)
        throw std::invalid_argument("frame size " + std::to_string(frame.size) + " outside [64, 1538]");

    auto f = std::make_shared<Frame>(std::move(frame));
    f->id = next_frame_id_++;
    f->created = engine_.now();
    auto& c = counters_[f->pcp];
    ++c.sent;
    c.bytes_sent += f->size;
    ++live_[f->pcp];

    if (f->dst == f->src) {
        engine_.schedule(engine_.now(), f->dst, EventKind::FrameArrival, [this, f] { deliver(f); });
        return f->id;
    }
    enqueue_at(f->src, f);
    return f->id;
}

void Network::enqueue_at(NodeId node, std::shared_ptr<Frame> frame)
{
    const NodeId next = next_hop_[node][frame->dst];
    auto& p = port(node, next);
    frame->hops.push_back(HopRecord{node, next, engine_.now(), std::nullopt, std::nullopt});
    if (!p.enqueue(frame)) {
        drop(frame, node);
        return;
    }
    if (p.idle(engine_.now()) && !p.in_flight())
        try_transmit(p);
}

void Network::try_transmit(EgressPort& p)
{
    const SimTime now = engine_.now();
    if (!p.idle(now) || p.in_flight())
        return;
    const Frame* head = p.select_next(now);
    if (!head) {
        if (!p.empty())
            schedule_wake(p);
        return;
    }

    const int pcp = head->pcp;
    const Duration wire = p.wire_time_of(*head);
    if (const auto& gcl = p.gate_control()) {
        const LocalTime local = p.local_time(now);
        const Duration remaining = gcl->open_remaining(pcp, local);
        const Duration need = p.local_wire_time(*head);
        if (remaining < need) {
            throw InvariantViolation("qbv-gate-compliance",
                                     "class " + std::to_string(pcp) + " frame " + std::to_string(head->id) +
                                         " would start with " + std::to_string(remaining) +
                                         " ns of window left, needs " + std::to_string(need));
        }
        ++gated_transmissions_;
    }

    auto frame = p.pop(pcp);
    frame->hops.back().dequeued = now;
    const SimTime end = now + wire;
    p.set_busy_until(end);
    p.set_in_flight(frame);
    engine_.schedule(end, p.owner(), EventKind::TransmitEnd, [this, &p] { on_transmit_end(p); });
    const NodeId next = p.peer();
    engine_.schedule(end + p.link().propagation, next, EventKind::FrameArrival,
                     [this, next, frame] { arrive(next, frame); });

    // Callbacks may send new frames; the port is already marked busy.
    if (observer_)
        observer_(p, *frame, now);
    if (frame->hops.size() == 1 && frame->on_source_egress)
        frame->on_source_egress(*frame, now);
}

void Network::on_transmit_end(EgressPort& p)
{
    p.set_in_flight(nullptr);
    try_transmit(p);
}

void Network::schedule_wake(EgressPort& p)
{
    const auto delay = p.time_until_eligible(engine_.now());
    if (!delay)
        return;
    SimTime at = engine_.now() + std::max<Duration>(*delay, 1);
    if (auto* clock = clocks_[p.owner()]) {
        const LocalTime local = p.local_time(engine_.now());
        at = std::max(clock->true_time_for(local + *delay, engine_.now()), engine_.now() + 1);
    }
    if (p.wake && engine_.is_pending(*p.wake))
        engine_.cancel(*p.wake);
    p.wake = engine_.schedule(at, p.owner(), EventKind::GateWake, [this, &p] {
        p.wake.reset();
        try_transmit(p);
    });
}

void Network::arrive(NodeId node, std::shared_ptr<Frame> frame)
{
    frame->hops.back().arrived = engine_.now();
    if (node == frame->dst)
        deliver(frame);
    else
        enqueue_at(node, std::move(frame));
}

void Network::deliver(const std::shared_ptr<Frame>& frame)
{
    auto& c = counters_[frame->pcp];
    ++c.delivered;
    c.bytes_delivered += frame->size;
    --live_[frame->pcp];
    finish(frame);
    if (frame->on_delivered)
        frame->on_delivered(*frame, engine_.now());
}

void Network::drop(const std::shared_ptr<Frame>& frame, NodeId hop)
{
    ++counters_[frame->pcp].dropped;
    --live_[frame->pcp];
    drops_.push_back(DropRecord{frame->id, frame->kind, frame->pcp, hop, engine_.now()});
    finish(frame);
    if (frame->on_dropped)
        frame->on_dropped(*frame, hop);
}

void Network::finish(const std::shared_ptr<Frame>& frame)
{
    if (!config_.frame_trace)
        return;
    Frame copy;
    copy.id = frame->id;
    copy.src = frame->src;
    copy.dst = frame->dst;
    copy.size = frame->size;
    copy.pcp = frame->pcp;
    copy.kind = frame->kind;
    copy.created = frame->created;
    copy.hops = frame->hops;
    finished_.push_back(std::move(copy));
}

void Network::check_conservation() const
{
    for (int pcp = 0; pcp < kNumClasses; ++pcp) {
        const auto& c = counters_[pcp];
        if (c.sent != c.delivered + c.dropped + live_[pcp]) {
            throw InvariantViolation("frame-conservation",
                                     "class " + std::to_string(pcp) + ": sent " + std::to_string(c.sent) +
                                         " != delivered " + std::to_string(c.delivered) + " + dropped " +
                                         std::to_string(c.dropped) + " + in-network " + std::to_string(live_[pcp]));
        }
    }
}

void Network::write_frame_trace(std::ostream& out) const
{
    const auto ns = [](const std::optional<SimTime>& t) {
        return t ? std::to_string(t->ns()) : std::string("-1");
    };
    out << "frame_id,kind,pcp,hop,node,next,enqueue_ns,dequeue_ns,arrive_ns\n";
    for (const auto& f : finished_) {
        for (std::size_t i = 0; i < f.hops.size(); ++i) {
            const auto& h = f.hops[i];
            out << f.id << ',' << to_string(f.kind) << ',' << int{f.pcp} << ',' << i << ','
                << topology_.node(h.node).name << ',' << topology_.node(h.next).name << ',' << h.enqueued.ns() << ','
                << ns(h.dequeued) << ',' << ns(h.arrived) << '\n';
        }
    }
}

} // namespace chainsync::netsim
