#pragma once

#include "chainsync/pubsub/subscriber.hpp"
#include "chainsync/pubsub/timer.hpp"

namespace chainsync::pubsub {

struct PublisherTask {
    std::string topic;
    netsim::NodeId node = 0;
    netsim::NodeId subscriber = 0;
    Duration period = 100 * kMillisecond;
    TimerMode mode = TimerMode::Relative;
    /// Work done between wake-up and the publish call, true-time ns.
    Distribution exec_time = Distribution::constant(1 * kMillisecond);
    /// Datagram payload bytes.
    std::uint32_t message_size = 256;
    std::uint8_t pcp = 0;
    /// Relative mode: extra delay before the first fire.
    /// Absolute mode: phase of the fire boundaries within the period.
    Duration offset = 0;
};

/// Periodic publisher running on a node's local clock.
///
/// Each cycle: wake at the timer target, run exec_time, stamp t_PUB (software
/// stamp on the node clock), hand the frame to the NIC after publish_latency,
/// then re-arm from the completion instant.
class Publisher {
public:
    Publisher(netsim::Network& network, ClockLookup clocks, PublisherTask task, StackModel stack,
              Subscriber& subscriber);

    Publisher(const Publisher&) = delete;
    Publisher& operator=(const Publisher&) = delete;

    void start(SimTime at);

    [[nodiscard]] const PublisherTask& task() const noexcept { return task_; }
    [[nodiscard]] std::uint64_t published() const noexcept { return seq_; }
    [[nodiscard]] std::uint64_t overruns() const noexcept { return overruns_; }

private:
    void arm(LocalTime target);
    void on_timer(LocalTime target);
    void on_complete(LocalTime target);

    netsim::Network& network_;
    ClockLookup clocks_;
    PublisherTask task_;
    StackModel stack_;
    Subscriber& subscriber_;
    clocks::TimestampModel stamp_model_;
    RngStream exec_stream_;
    RngStream stack_stream_;
    RngStream stamp_stream_;
    std::uint32_t frame_size_ = 0;
    std::uint64_t seq_ = 0;
    std::uint64_t overruns_ = 0;
};

} // namespace chainsync::pubsub
