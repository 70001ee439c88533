#pragma once

#include "chainsync/clocks/timestamp.hpp"
#include "chainsync/netsim/network.hpp"
#include "chainsync/pubsub/stack_model.hpp"
#include "chainsync/pubsub/trace.hpp"

#include <functional>
#include <string>
#include <vector>

namespace chainsync::pubsub {

using ClockLookup = std::function<clocks::DisciplinedClock&(netsim::NodeId)>;

/// A published message plus the sender-side oracle values.
struct Message {
    std::string topic;
    std::uint64_t seq = 0;
    /// t_PUB, taken right before the publish call.
    LocalTime header_stamp = 0;
    std::uint32_t size = 0;
    SimTime true_send{};
    Duration pub_clock_error = 0;
    Duration pub_noise = 0;
};

/// Subscription callback for one topic: stamps t_SUB on entry and appends a
/// TraceRecord to the shared sink.
class Subscriber {
public:
    Subscriber(netsim::Network& network, ClockLookup clocks, std::string topic, netsim::NodeId node, StackModel stack,
               std::vector<TraceRecord>& sink);

    Subscriber(const Subscriber&) = delete;
    Subscriber& operator=(const Subscriber&) = delete;

    [[nodiscard]] const std::string& topic() const noexcept { return topic_; }
    [[nodiscard]] netsim::NodeId node() const noexcept { return node_; }

    /// The message's frame reached this node at `at`.
    void deliver(const Message& msg, SimTime at);
    /// The message's frame was dropped in the network.
    void record_drop(const Message& msg);

    [[nodiscard]] std::uint64_t received() const noexcept { return received_; }
    [[nodiscard]] std::uint64_t dropped() const noexcept { return dropped_; }

private:
    netsim::Network& network_;
    ClockLookup clocks_;
    std::string topic_;
    netsim::NodeId node_;
    StackModel stack_;
    clocks::TimestampModel stamp_model_;
    RngStream stack_stream_;
    RngStream stamp_stream_;
    std::vector<TraceRecord>& sink_;
    std::uint64_t received_ = 0;
    std::uint64_t dropped_ = 0;
};

} // namespace chainsync::pubsub
