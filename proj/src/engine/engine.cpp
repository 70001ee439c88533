#include "chainsync/engine/engine.hpp"

#include "chainsync/engine/errors.hpp"

#include <algorithm>
#include <string>

namespace chainsync {

Engine::Engine(std::uint64_t seed) : seed_(seed) {}

bool Engine::later(const Entry& a, const Entry& b) noexcept
{
    if (a.event.fire_at != b.event.fire_at)
        return a.event.fire_at > b.event.fire_at;
    return a.event.sequence > b.event.sequence;
}

EventHandle Engine::schedule(SimTime fire_at, ComponentId target, EventKind kind, Handler handler)
{
    if (fire_at < now_) {
        throw ContractViolation("event scheduled in the past: fire_at=" + std::to_string(fire_at.ns()) +
                                " now=" + std::to_string(now_.ns()));
    }
    const auto seq = next_sequence_++;
    heap_.push_back(Entry{Event{fire_at, target, kind, seq}, std::move(handler)});
    std::push_heap(heap_.begin(), heap_.end(), later);
    live_.insert(seq);
    return EventHandle{seq};
}

EventHandle Engine::schedule_after(Duration delay, ComponentId target, EventKind kind, Handler handler)
{
    if (delay < 0)
        throw ContractViolation("negative scheduling delay " + std::to_string(delay));
    return schedule(now_ + delay, target, kind, std::move(handler));
}

CancelResult Engine::cancel(EventHandle handle)
{
    if (cancelled_.contains(handle.sequence))
        return CancelResult::AlreadyCancelled;
    if (live_.erase(handle.sequence) == 0)
        return CancelResult::AlreadyFired;
    cancelled_.insert(handle.sequence);
    return CancelResult::Cancelled;
}

bool Engine::is_pending(EventHandle handle) const
{
    return live_.contains(handle.sequence);
}

std::size_t Engine::run_until(SimTime deadline)
{
    if (deadline < now_)
        throw ContractViolation("run_until deadline precedes current time");

    std::size_t count = 0;
    while (!heap_.empty() && heap_.front().event.fire_at <= deadline) {
        std::pop_heap(heap_.begin(), heap_.end(), later);
        Entry entry = std::move(heap_.back());
        heap_.pop_back();

        if (cancelled_.erase(entry.event.sequence) != 0)
            continue;
        live_.erase(entry.event.sequence);

        if (entry.event.fire_at < now_)
            throw InvariantViolation("event-time-monotonic", "popped event precedes current time");
        now_ = entry.event.fire_at;

        for (std::uint64_t v : {entry.event.fire_at.ns(), std::uint64_t{entry.event.target},
                                std::uint64_t{static_cast<std::uint8_t>(entry.event.kind)}, entry.event.sequence}) {
            digest_ = (digest_ ^ v) * 0x100000001b3ULL;
        }
        if (record_)
            log_.push_back(entry.event);

        ++processed_;
        ++count;
        entry.handler();
    }
    now_ = deadline;
    return count;
}

} // namespace chainsync
