#include "chainsync/netsim/egress_port.hpp"

#include <cmath>
#include <stdexcept>

namespace chainsync::netsim {

EgressPort::EgressPort(NodeId owner, NodeId peer, Link link, std::size_t capacity)
    : owner_(owner), peer_(peer), link_(link), capacity_(capacity)
{
    if (capacity_ == 0)
        throw std::invalid_argument("egress queue capacity must be positive");
}

bool EgressPort::enqueue(std::shared_ptr<Frame> frame)
{
    auto& q = queues_.at(frame->pcp);
    if (q.size() >= capacity_)
        return false;
    q.push_back(std::move(frame));
    return true;
}

bool EgressPort::empty() const
{
    for (const auto& q : queues_) {
        if (!q.empty())
            return false;
    }
    return true;
}

LocalTime EgressPort::local_time(SimTime now) const
{
    return clock_ ? clock_->peek(now) : static_cast<LocalTime>(now.ns());
}

Duration EgressPort::local_wire_time(const Frame& frame) const
{
    const Duration wire = wire_time_of(frame);
    if (!clock_)
        return wire;
    return static_cast<Duration>(std::ceil(static_cast<double>(wire) * (1.0 + clock_->effective_ppm() * 1e-6)));
}

const Frame* EgressPort::select_next(SimTime now) const
{
    std::optional<LocalTime> local;
    for (int pcp = kNumClasses - 1; pcp >= 0; --pcp) {
        const auto& q = queues_[pcp];
        if (q.empty())
            continue;
        if (!gcl_)
            return q.front().get();
        if (!local)
            local = local_time(now);
        if (gcl_->open_remaining(pcp, *local) >= local_wire_time(*q.front()))
            return q.front().get();
    }
    return nullptr;
}

std::shared_ptr<Frame> EgressPort::pop(int pcp)
{
    auto& q = queues_.at(pcp);
    if (q.empty())
        throw std::logic_error("pop from empty egress queue");
    auto f = std::move(q.front());
    q.pop_front();
    return f;
}

std::optional<Duration> EgressPort::time_until_eligible(SimTime now) const
{
    if (!gcl_)
        return empty() ? std::nullopt : std::optional<Duration>{0};
    const LocalTime local = local_time(now);
    std::optional<Duration> best;
    for (int pcp = 0; pcp < kNumClasses; ++pcp) {
        const auto& q = queues_[pcp];
        if (q.empty())
            continue;
        if (auto d = gcl_->time_until_fits(pcp, local, local_wire_time(*q.front())); d && (!best || *d < *best))
            best = d;
    }
    return best;
}

} // namespace chainsync::netsim
