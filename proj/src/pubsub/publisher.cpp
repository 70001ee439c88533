#include "chainsync/pubsub/publisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainsync::pubsub {

Publisher::Publisher(netsim::Network& network, ClockLookup clocks, PublisherTask task, StackModel stack,
                     Subscriber& subscriber)
    : network_(network),
      clocks_(std::move(clocks)),
      task_(std::move(task)),
      stack_(std::move(stack)),
      subscriber_(subscriber),
      stamp_model_(clocks::TimestampModel::software(stack_.stamp_noise)),
      exec_stream_(network.engine().stream("pub.exec." + task_.topic)),
      stack_stream_(network.engine().stream("pub.stack." + task_.topic)),
      stamp_stream_(network.engine().stream("pub.stamp." + task_.topic))
{
    if (task_.period <= 0)
        throw std::invalid_argument("publisher '" + task_.topic + "': period must be positive");
    if (task_.exec_time.lower_bound() < 0)
        throw std::invalid_argument("publisher '" + task_.topic + "': exec_time must be non-negative");
    if (task_.pcp >= netsim::kNumClasses)
        throw std::invalid_argument("publisher '" + task_.topic + "': pcp must be in 0..7");
    frame_size_ = netsim::frame_size_for_payload(task_.message_size);
}

void Publisher::start(SimTime at)
{
    network_.engine().schedule(at, task_.node, EventKind::Timer, [this] {
        const LocalTime local = clocks_(task_.node).local_now(network_.engine().now());
        const LocalTime first = task_.mode == TimerMode::Relative
                                    ? local + task_.period + task_.offset
                                    : next_fire(TimerMode::Absolute, task_.period, local, task_.offset).at;
        arm(first);
    });
}

void Publisher::arm(LocalTime target)
{
    auto& engine = network_.engine();
    const SimTime now = engine.now();
    const SimTime at = std::max(clocks_(task_.node).true_time_for(target, now), now);
    engine.schedule(at, task_.node, EventKind::Timer, [this, target] { on_timer(target); });
}

void Publisher::on_timer(LocalTime target)
{
    auto& engine = network_.engine();
    if (clocks_(task_.node).local_now(engine.now()) < target) {
        // The clock rate changed since the timer was armed.
        arm(target);
        return;
    }
    const auto exec = static_cast<Duration>(std::llround(std::max(0.0, task_.exec_time.sample(exec_stream_))));
    engine.schedule_after(exec, task_.node, EventKind::Publish, [this, target] { on_complete(target); });
}

void Publisher::on_complete(LocalTime target)
{
    auto& engine = network_.engine();
    const SimTime now = engine.now();
    auto& clock = clocks_(task_.node);
    const auto st = clocks::stamp(stamp_model_, clock, now, stamp_stream_);

    Message msg;
    msg.topic = task_.topic;
    msg.seq = seq_++;
    msg.header_stamp = st.value;
    msg.size = task_.message_size;
    msg.true_send = now;
    msg.pub_clock_error = clock.error(now);
    msg.pub_noise = st.noise;

    const auto latency = static_cast<Duration>(std::llround(stack_.publish_latency.sample(stack_stream_)));
    engine.schedule_after(latency, task_.node, EventKind::Publish, [this, msg] {
        netsim::Frame f;
        f.src = task_.node;
        f.dst = task_.subscriber;
        f.size = frame_size_;
        f.pcp = task_.pcp;
        f.kind = netsim::FrameKind::Topic;
        f.on_delivered = [this, msg](const netsim::Frame&, SimTime at) { subscriber_.deliver(msg, at); };
        f.on_dropped = [this, msg](const netsim::Frame&, netsim::NodeId) { subscriber_.record_drop(msg); };
        network_.send(std::move(f));
    });

    const LocalTime finished = st.value - st.noise;
    const auto next = next_fire(task_.mode, task_.period, finished, task_.offset, target);
    overruns_ += static_cast<std::uint64_t>(next.skipped);
    arm(next.at);
}

} // namespace chainsync::pubsub
