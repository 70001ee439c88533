#include "chainsync/pubsub/subscriber.hpp"

#include <cmath>

namespace chainsync::pubsub {

Subscriber::Subscriber(netsim::Network& network, ClockLookup clocks, std::string topic, netsim::NodeId node,
                       StackModel stack, std::vector<TraceRecord>& sink)
    : network_(network),
      clocks_(std::move(clocks)),
      topic_(std::move(topic)),
      node_(node),
      stack_(std::move(stack)),
      stamp_model_(clocks::TimestampModel::software(stack_.stamp_noise)),
      stack_stream_(network.engine().stream("sub.stack." + topic_)),
      stamp_stream_(network.engine().stream("sub.stamp." + topic_)),
      sink_(sink)
{
}

void Subscriber::deliver(const Message& msg, SimTime at)
{
    const auto latency = static_cast<Duration>(std::llround(stack_.subscribe_latency.sample(stack_stream_)));
    network_.engine().schedule(at + latency, node_, EventKind::Subscribe, [this, msg] {
        const SimTime now = network_.engine().now();
        auto& clock = clocks_(node_);
        const auto st = clocks::stamp(stamp_model_, clock, now, stamp_stream_);
        TraceRecord r;
        r.topic = msg.topic;
        r.seq = msg.seq;
        r.t_pub = msg.header_stamp;
        r.t_sub = st.value;
        r.true_send = msg.true_send;
        r.true_recv = now;
        r.pub_clock_error = msg.pub_clock_error;
        r.pub_noise = msg.pub_noise;
        r.sub_clock_error = clock.error(now);
        r.sub_noise = st.noise;
        sink_.push_back(std::move(r));
        ++received_;
    });
}

void Subscriber::record_drop(const Message& msg)
{
    TraceRecord r;
    r.topic = msg.topic;
    r.seq = msg.seq;
    r.t_pub = msg.header_stamp;
    r.true_send = msg.true_send;
    r.dropped = true;
    r.pub_clock_error = msg.pub_clock_error;
    r.pub_noise = msg.pub_noise;
    sink_.push_back(std::move(r));
    ++dropped_;
}

} // namespace chainsync::pubsub
