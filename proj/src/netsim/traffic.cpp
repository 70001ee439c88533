#include "chainsync/netsim/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace chainsync::netsim {

std::string_view to_string(TrafficPattern p)
{
    return p == TrafficPattern::Poisson ? "poisson" : "periodic";
}

TrafficPattern traffic_pattern_from_string(std::string_view s)
{
    if (s == "periodic" || s == "saturating-periodic")
        return TrafficPattern::SaturatingPeriodic;
    if (s == "poisson")
        return TrafficPattern::Poisson;
    throw std::invalid_argument("unknown traffic pattern '" + std::string(s) + "' (periodic | poisson)");
}

double mean_gap_ns(const TrafficGenerator& gen, std::uint64_t rate_bps)
{
    return static_cast<double>(wire_time(frame_size_for_payload(gen.frame_size), rate_bps)) / gen.load;
}

TrafficSource::TrafficSource(Network& network, TrafficGenerator gen, RngStream stream)
    : network_(network), gen_(std::move(gen)), stream_(std::move(stream))
{
    if (!(gen_.load >= 0.0 && gen_.load <= 1.0))
        throw std::invalid_argument("traffic load must be in [0, 1]");
    if (gen_.pcp >= kNumClasses)
        throw std::invalid_argument("traffic pcp must be in 0..7");
    wire_size_ = frame_size_for_payload(gen_.frame_size);
    if (gen_.src == gen_.dst)
        throw std::invalid_argument("traffic source and sink must differ");
    if (gen_.load > 0) {
        const auto first = network_.next_hop(gen_.src, gen_.dst);
        gap_ = mean_gap_ns(gen_, network_.topology().link_between(gen_.src, first).rate_bps);
    }
}

void TrafficSource::start(SimTime at)
{
    if (gen_.load <= 0)
        return;
    origin_ = at;
    poisson_clock_ = 0;
    if (gen_.pattern == TrafficPattern::Poisson)
        poisson_clock_ = stream_.exponential(gap_);
    network_.engine().schedule(origin_ + static_cast<Duration>(std::llround(poisson_clock_)), gen_.src,
                               EventKind::Traffic, [this] { emit(); });
}

void TrafficSource::emit()
{
    Frame f;
    f.src = gen_.src;
    f.dst = gen_.dst;
    f.size = wire_size_;
    f.pcp = gen_.pcp;
    f.kind = FrameKind::Background;
    network_.send(std::move(f));
    ++sent_;
    schedule_next();
}

void TrafficSource::schedule_next()
{
    double offset = 0;
    if (gen_.pattern == TrafficPattern::Poisson) {
        poisson_clock_ += stream_.exponential(gap_);
        offset = poisson_clock_;
    } else {
        offset = static_cast<double>(sent_) * gap_;
    }
    const SimTime at = origin_ + static_cast<Duration>(std::llround(offset));
    network_.engine().schedule(std::max(at, network_.engine().now()), gen_.src, EventKind::Traffic,
                               [this] { emit(); });
}

} // namespace chainsync::netsim
