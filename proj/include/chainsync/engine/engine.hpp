#pragma once

#include "chainsync/engine/rng.hpp"
#include "chainsync/engine/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace chainsync {

using ComponentId = std::uint32_t;

enum class EventKind : std::uint8_t {
    Generic,
    Timer,
    TransmitEnd,
    FrameArrival,
    GateWake,
    PtpSync,
    PtpDelayReq,
    Publish,
    Subscribe,
    Traffic,
};

struct Event {
    SimTime fire_at;
    ComponentId target = 0;
    EventKind kind = EventKind::Generic;
    std::uint64_t sequence = 0;
};

struct EventHandle {
    std::uint64_t sequence = 0;
};

enum class CancelResult { Cancelled, AlreadyCancelled, AlreadyFired };

/// Deterministic discrete-event core.
///
/// Events fire in (fire_at, sequence) order where sequence is a global
/// allocation counter, so equal-time events run in scheduling order no matter
/// how the heap arranges them. Confined to one thread at a time; independent
/// engines share nothing.
class Engine {
public:
    using Handler = std::function<void()>;

    explicit Engine(std::uint64_t seed = 0);

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;
    Engine(Engine&&) = default;
    Engine& operator=(Engine&&) = default;

    [[nodiscard]] SimTime now() const noexcept { return now_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    /// Queues an event; fire_at before now() throws ContractViolation.
    EventHandle schedule(SimTime fire_at, ComponentId target, EventKind kind, Handler handler);

    EventHandle schedule_after(Duration delay, ComponentId target, EventKind kind, Handler handler);

    /// Cancelled events never fire. Cancelling a fired event is a no-op.
    CancelResult cancel(EventHandle handle);

    [[nodiscard]] bool is_pending(EventHandle handle) const;

    /// Processes every event with fire_at <= deadline, then sets now() to the
    /// deadline. Returns the number of events processed (cancelled ones excluded).
    std::size_t run_until(SimTime deadline);

    /// Named random stream derived from the engine seed.
    [[nodiscard]] RngStream stream(std::string_view label) const { return RngStream(seed_, label); }

    [[nodiscard]] std::uint64_t processed_events() const noexcept { return processed_; }
    [[nodiscard]] std::size_t queued_events() const noexcept { return live_.size(); }

    /// Running FNV-style digest over (fire_at, target, kind, sequence) of every
    /// processed event; equal digests mean equal event logs.
    [[nodiscard]] std::uint64_t event_digest() const noexcept { return digest_; }

    void record_events(bool enabled) { record_ = enabled; }
    [[nodiscard]] const std::vector<Event>& event_log() const noexcept { return log_; }

private:
    struct Entry {
        Event event;
        Handler handler;
    };

    static bool later(const Entry& a, const Entry& b) noexcept;

    std::uint64_t seed_;
    SimTime now_{};
    std::uint64_t next_sequence_ = 1;
    std::uint64_t processed_ = 0;
    std::uint64_t digest_ = 0xcbf29ce484222325ULL;
    bool record_ = false;
    std::vector<Entry> heap_;
    std::unordered_set<std::uint64_t> live_;
    std::unordered_set<std::uint64_t> cancelled_;
    std::vector<Event> log_;
};

} // namespace chainsync
