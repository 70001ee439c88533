#include "chainsync/scenario/runner.hpp"

#include "chainsync/engine/errors.hpp"
#include "chainsync/ptp/protocol.hpp"
#include "chainsync/pubsub/publisher.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace chainsync::scenario {

namespace {

netsim::Topology build_topology(const Scenario& s)
{
    netsim::Topology t;
    for (std::size_t i = 0; i < s.chain.size(); ++i) {
        const bool end = i == 0 || i + 1 == s.chain.size();
        t.add_node(s.chain[i], end ? netsim::NodeKind::Endpoint : netsim::NodeKind::Bridge);
    }
    for (std::size_t i = 0; i + 1 < s.chain.size(); ++i) {
        auto rate = s.rate_bps;
        auto prop = s.propagation;
        for (const auto& id : {s.chain[i] + "-" + s.chain[i + 1], s.chain[i + 1] + "-" + s.chain[i]}) {
            if (auto it = s.links.find(id); it != s.links.end()) {
                rate = it->second.rate_bps.value_or(rate);
                prop = it->second.propagation.value_or(prop);
            }
        }
        t.add_link(static_cast<netsim::NodeId>(i), static_cast<netsim::NodeId>(i + 1), rate, prop);
    }
    return t;
}

clocks::OscillatorModel draw_oscillator(const Scenario& s, const std::string& node, const Engine& engine)
{
    auto drift_stream = engine.stream("clock.drift." + node);
    auto offset_stream = engine.stream("clock.offset." + node);
    clocks::OscillatorModel m;
    m.drift_ppm = s.clocks.drift_ppm.sample(drift_stream);
    m.initial_offset = static_cast<Duration>(std::llround(s.clocks.offset.sample(offset_stream)));
    m.wander_sigma_ppm = s.clocks.wander_ppm;
    m.jitter_sigma_ns = s.clocks.jitter_ns;
    if (auto it = s.clock_overrides.find(node); it != s.clock_overrides.end()) {
        const auto& o = it->second;
        m.drift_ppm = o.drift_ppm.value_or(m.drift_ppm);
        m.initial_offset = o.offset.value_or(m.initial_offset);
        m.wander_sigma_ppm = o.wander_ppm.value_or(m.wander_sigma_ppm);
        m.jitter_sigma_ns = o.jitter_ns.value_or(m.jitter_sigma_ns);
    }
    return m;
}

} // namespace

RunResult run_scenario(const Scenario& s)
{
    validate(s);
    RunResult result;
    Engine engine(s.seed);
    netsim::Network network(engine, build_topology(s), {s.queue_capacity, s.frame_trace});
    const auto& topo = network.topology();

    std::vector<clocks::DisciplinedClock> clocks;
    clocks.reserve(s.chain.size());
    for (const auto& node : s.chain) {
        const auto osc = draw_oscillator(s, node, engine);
        result.oscillators.emplace_back(node, osc);
        clocks.emplace_back(osc, s.epoch, engine.stream("clock.wander." + node));
    }
    for (netsim::NodeId n = 0; n < clocks.size(); ++n)
        network.attach_clock(n, &clocks[n]);
    const auto lookup = [&clocks](netsim::NodeId n) -> clocks::DisciplinedClock& { return clocks.at(n); };

    for (const auto& q : s.qbv) {
        if (q.enabled)
            network.set_gate_control(topo.require(q.node), topo.require(q.toward),
                                     netsim::GateControlList(q.cycle, q.entries, q.base_time));
    }

    std::unique_ptr<ptp::PtpDomain> domain;
    if (s.ptp.enabled) {
        ptp::PtpConfig cfg;
        cfg.sync_interval = s.ptp.sync_interval;
        cfg.delay_req_interval = s.ptp.delay_req_interval;
        cfg.stamp_noise = s.ptp.stamp_noise;
        cfg.pcp = static_cast<std::uint8_t>(s.priority.ptp);
        cfg.servo.kp = s.ptp.kp;
        cfg.servo.ki = s.ptp.ki;
        cfg.servo.step_threshold = s.ptp.step_threshold;
        std::vector<netsim::NodeId> slaves;
        for (const auto& n : s.ptp.slaves)
            slaves.push_back(topo.require(n));
        domain = std::make_unique<ptp::PtpDomain>(network, lookup, topo.require(s.ptp.master), slaves, cfg);
        domain->start(SimTime{});
    }

    std::vector<pubsub::TraceRecord>& trace = result.data.trace;
    std::vector<std::unique_ptr<pubsub::Subscriber>> subscribers;
    std::vector<std::unique_ptr<pubsub::Publisher>> publishers;
    for (const auto& p : s.publishers) {
        subscribers.push_back(std::make_unique<pubsub::Subscriber>(network, lookup, p.topic, topo.require(p.subscriber),
                                                                   s.stack, trace));
        pubsub::PublisherTask task;
        task.topic = p.topic;
        task.node = topo.require(p.node);
        task.subscriber = topo.require(p.subscriber);
        task.period = p.period;
        task.mode = p.timer;
        task.exec_time = p.exec_time;
        task.message_size = p.size;
        task.pcp = static_cast<std::uint8_t>(p.pcp.value_or(s.priority.topic));
        task.offset = p.offset;
        publishers.push_back(std::make_unique<pubsub::Publisher>(network, lookup, task, s.stack, *subscribers.back()));
        publishers.back()->start(SimTime{});
    }

    std::vector<std::unique_ptr<netsim::TrafficSource>> sources;
    for (const auto& t : s.traffic) {
        netsim::TrafficGenerator g;
        g.name = t.name;
        g.src = topo.require(t.src);
        g.dst = topo.require(t.dst);
        g.load = t.load;
        g.frame_size = t.size;
        g.pattern = t.pattern;
        g.pcp = static_cast<std::uint8_t>(t.pcp.value_or(s.priority.background));
        sources.push_back(std::make_unique<netsim::TrafficSource>(network, g, engine.stream("traffic." + t.name)));
        sources.back()->start(SimTime{});
    }

    auto& data = result.data;
    try {
        engine.run_until(SimTime{static_cast<std::uint64_t>(s.duration)});
        network.check_conservation();
    } catch (const InvariantViolation& e) {
        data.violations.push_back(e.what());
        result.exit_code = kExitInvariant;
    }

    data.scenario = s.name;
    data.seed = s.seed;
    data.epoch = s.epoch;
    data.duration = s.duration;
    data.chain = s.chain;
    for (const auto& p : s.publishers)
        data.topics.push_back({p.topic, p.period});
    if (domain) {
        data.ptp_enabled = true;
        data.ptp_records = domain->records();
        data.all_locked_at = domain->all_locked_at();
        data.lock_losses = domain->total_lock_losses();
    }
    data.frames = network.counters();
    data.events = engine.processed_events();
    data.event_digest = engine.event_digest();
    data.gated_transmissions = network.gated_transmissions();
    result.report = analysis::analyze(data);

    if (s.frame_trace) {
        std::ostringstream ft;
        network.write_frame_trace(ft);
        result.frame_trace_csv = ft.str();
    }
    return result;
}

void write_bundle(const std::filesystem::path& dir, const Scenario& s, const RunResult& r)
{
    std::filesystem::create_directories(dir);
    const auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("scenario.ini");
        f << canonical_ini(s);
    }
    {
        auto f = open("trace.csv");
        pubsub::write_trace_csv(f, r.data.trace, r.data.epoch);
    }
    {
        auto f = open("report.txt");
        analysis::write_report(f, r.report);
    }
    {
        auto f = open("dt_pub.csv");
        analysis::write_dt_csv(f, r.data, analysis::StampColumn::Pub);
    }
    {
        auto f = open("dt_sub.csv");
        analysis::write_dt_csv(f, r.data, analysis::StampColumn::Sub);
    }
    {
        auto f = open("latency.csv");
        analysis::write_latency_csv(f, r.report);
    }
    {
        auto f = open("ptp_offsets.csv");
        analysis::write_ptp_offsets_csv(f, r.data);
    }
    {
        auto f = open("ptp_max_offset.csv");
        analysis::write_ptp_max_offset_csv(f, r.report);
    }
    {
        auto f = open("histograms.csv");
        analysis::write_histograms_csv(f, r.report);
    }
    if (s.frame_trace) {
        auto f = open("frames.csv");
        f << r.frame_trace_csv;
    }
}

} // namespace chainsync::scenario
