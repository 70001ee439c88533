#include "chainsync/ptp/protocol.hpp"

#include <stdexcept>

namespace chainsync::ptp {

using netsim::NodeId;

PtpDomain::PtpDomain(netsim::Network& network, ClockLookup clocks, NodeId master, std::vector<NodeId> slaves,
                     PtpConfig config)
    : network_(network),
      clocks_(std::move(clocks)),
      master_(master),
      config_(std::move(config)),
      stamp_model_(clocks::StampKind::Hardware, config_.stamp_noise),
      master_stream_(network.engine().stream("ptp.stamp." + network.topology().node(master).name))
{
    if (config_.sync_interval <= 0 || config_.delay_req_interval <= 0)
        throw std::invalid_argument("ptp intervals must be positive");
    if (config_.delay_req_spread < 0 || config_.delay_req_spread >= config_.sync_interval)
        throw std::invalid_argument("ptp delay request spread must lie in [0, sync_interval)");
    if (config_.pcp >= netsim::kNumClasses)
        throw std::invalid_argument("ptp pcp must be in 0..7");
    if (slaves.empty())
        throw std::invalid_argument("ptp domain needs at least one slave");
    for (NodeId n : slaves) {
        if (n == master_)
            throw std::invalid_argument("ptp master cannot also be a slave");
        for (const auto& s : slaves_) {
            if (s->node == n)
                throw std::invalid_argument("duplicate ptp slave " + network.topology().node(n).name);
        }
        const auto& name = network.topology().node(n).name;
        slaves_.push_back(std::make_unique<Slave>(n, config_, network.engine().stream("ptp.stamp." + name),
                                                  network.engine().stream("ptp.dreq." + name)));
    }
}

PortRole PtpDomain::role(NodeId node) const
{
    if (node == master_)
        return PortRole::Master;
    for (const auto& s : slaves_) {
        if (s->node == node)
            return PortRole::Slave;
    }
    throw std::invalid_argument("node is not part of the ptp domain");
}

void PtpDomain::start(SimTime at)
{
    network_.engine().schedule(at, master_, EventKind::PtpSync, [this] { send_sync_round(); });
}

netsim::Frame PtpDomain::make_frame(NodeId src, NodeId dst) const
{
    netsim::Frame f;
    f.src = src;
    f.dst = dst;
    f.size = config_.frame_size;
    f.pcp = config_.pcp;
    f.kind = netsim::FrameKind::Ptp;
    return f;
}

LocalTime PtpDomain::hw_stamp(NodeId node, RngStream& stream, SimTime at)
{
    return clocks::stamp(stamp_model_, clocks_(node), at, stream).value;
}

void PtpDomain::send_sync_round()
{
    const std::uint64_t seq = ++sync_seq_;
    for (auto& s : slaves_)
        send_sync(*s, seq);
    network_.engine().schedule_after(config_.sync_interval, master_, EventKind::PtpSync, [this] { send_sync_round(); });
}

void PtpDomain::send_sync(Slave& s, std::uint64_t seq)
{
    auto sync = make_frame(master_, s.node);
    sync.on_source_egress = [this, &s, seq](const netsim::Frame&, SimTime at) {
        const LocalTime t1 = hw_stamp(master_, master_stream_, at);
        auto follow_up = make_frame(master_, s.node);
        follow_up.on_delivered = [this, &s, seq, t1](const netsim::Frame&, SimTime rx) { on_follow_up(s, seq, t1, rx); };
        network_.send(std::move(follow_up));
    };
    sync.on_delivered = [this, &s, seq](const netsim::Frame&, SimTime at) { on_sync_arrival(s, seq, at); };
    network_.send(std::move(sync));
}

void PtpDomain::on_sync_arrival(Slave& s, std::uint64_t seq, SimTime at)
{
    const LocalTime t2 = hw_stamp(s.node, s.stamp_stream, at);
    // A stamp taken mid-slew is useless as a delay-request base; mark it with
    // an epoch that can never match.
    const bool slewing = clocks_(s.node).pending_slew_ns() != 0;
    s.t2_by_seq[seq] = {t2, slewing ? ~std::uint64_t{0} : s.phase_epoch};
    while (s.t2_by_seq.size() > 8)
        s.t2_by_seq.erase(s.t2_by_seq.begin());
}

void PtpDomain::on_follow_up(Slave& s, std::uint64_t seq, LocalTime t1, SimTime at)
{
    ++s.syncs;
    auto it = s.t2_by_seq.find(seq);
    if (it == s.t2_by_seq.end())
        return;
    const auto [t2, epoch] = it->second;
    s.t2_by_seq.erase(it);

    SyncSample base;
    base.t1 = t1;
    base.t2 = t2;

    auto& slave_clock = clocks_(s.node);
    auto& master_clock = clocks_(master_);
    const Duration true_offset = slave_clock.peek(at) - master_clock.peek(at);

    const bool want_dreq = !s.locked || s.filter.accepted() < config_.fast_start_samples || !s.last_delay_req ||
                           at - *s.last_delay_req >= config_.delay_req_interval;

    if (epoch == s.phase_epoch && slave_clock.pending_slew_ns() == 0) {
        const auto delay = s.filter.value();
        if (delay && s.filter.accepted() >= config_.min_delay_samples) {
            const Duration offset = (t2 - t1) - *delay;
            s.last_delay = delay;
            run_servo(s, offset, true_offset, at);
        }
    } else {
        ++s.discarded;
    }

    if (want_dreq) {
        s.last_delay_req = at;
        const auto wait = static_cast<Duration>(Distribution::uniform(0, static_cast<double>(config_.delay_req_spread))
                                                    .sample(s.dreq_stream));
        network_.engine().schedule_after(wait, s.node, EventKind::PtpDelayReq,
                                         [this, &s, base, epoch] { send_delay_req(s, base, epoch); });
    }
}

void PtpDomain::run_servo(Slave& s, Duration offset, Duration true_offset, SimTime at)
{
    const bool was_locked = s.servo.locked();
    const auto out = s.servo.update(offset, config_.sync_interval);
    clocks_(s.node).apply_correction(at, out.phase_step, out.freq_adjust_ppm);
    if (out.phase_step != 0)
        ++s.phase_epoch;
    s.locked = s.servo.locked();
    if (s.locked != was_locked) {
        if (s.locked && !s.first_lock)
            s.first_lock = at;
        if (lock_observer_)
            lock_observer_(s.node, s.locked, at);
    }
    records_.push_back(OffsetRecord{at, s.node, offset, true_offset, s.last_delay.value_or(0), s.locked});
}

void PtpDomain::send_delay_req(Slave& s, SyncSample base, std::uint64_t epoch)
{
    auto sample = std::make_shared<SyncSample>(base);
    auto valid = std::make_shared<bool>(epoch == s.phase_epoch);
    auto req = make_frame(s.node, master_);
    req.on_source_egress = [this, &s, sample, valid, epoch](const netsim::Frame&, SimTime at) {
        sample->t3 = hw_stamp(s.node, s.stamp_stream, at);
        if (epoch != s.phase_epoch || clocks_(s.node).pending_slew_ns() != 0)
            *valid = false;
    };
    req.on_delivered = [this, &s, sample, valid](const netsim::Frame&, SimTime at) {
        sample->t4 = hw_stamp(master_, master_stream_, at);
        auto resp = make_frame(master_, s.node);
        resp.on_delivered = [this, &s, sample, valid](const netsim::Frame&, SimTime) {
            if (!*valid) {
                ++s.discarded;
                return;
            }
            on_delay_resp(s, *sample);
        };
        network_.send(std::move(resp));
    };
    network_.send(std::move(req));
}

void PtpDomain::on_delay_resp(Slave& s, const SyncSample& sample)
{
    if (const auto od = compute_offset_delay(sample))
        s.filter.add(od->mean_path_delay);
}

std::vector<SlaveStatus> PtpDomain::status() const
{
    std::vector<SlaveStatus> out;
    for (const auto& s : slaves_) {
        SlaveStatus st;
        st.node = s->node;
        st.locked = s->locked;
        st.first_lock = s->first_lock;
        st.lock_losses = s->servo.lock_losses();
        st.phase_steps = s->servo.steps();
        st.syncs_received = s->syncs;
        st.samples_discarded = s->discarded;
        st.delay_outliers = s->filter.rejected();
        st.path_delay = s->filter.value();
        out.push_back(st);
    }
    return out;
}

bool PtpDomain::all_locked_once() const
{
    for (const auto& s : slaves_) {
        if (!s->first_lock)
            return false;
    }
    return true;
}

std::optional<SimTime> PtpDomain::all_locked_at() const
{
    std::optional<SimTime> last;
    for (const auto& s : slaves_) {
        if (!s->first_lock)
            return std::nullopt;
        if (!last || *s->first_lock > *last)
            last = s->first_lock;
    }
    return last;
}

int PtpDomain::total_lock_losses() const
{
    int n = 0;
    for (const auto& s : slaves_)
        n += s->servo.lock_losses();
    return n;
}

} // namespace chainsync::ptp
