#include "chainsync/scenario/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace chainsync::scenario {

namespace pt = boost::property_tree;

namespace {

/// Key access for one INI section that remembers which keys were consumed,
/// so leftovers can be reported as unknown.
class Section {
public:
    Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    /// Runs `parse` on the value of `key` if present, prefixing errors with
    /// the field name.
    void field(const std::string& key, const std::function<void(const std::string&)>& parse)
    {
        const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '/'));
        used_.insert(key);
        if (!v)
            return;
        try {
            parse(trim(*v));
        } catch (const ScenarioError& e) {
            throw ScenarioError("[" + name_ + "] " + key + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw ScenarioError("[" + name_ + "] " + key + ": " + e.what());
        }
    }

    void require(const std::string& key) const
    {
        if (!tree_.get_optional<std::string>(pt::ptree::path_type(key, '/')))
            throw ScenarioError("[" + name_ + "] " + key + ": required key missing");
    }

    void finish() const
    {
        for (const auto& [key, child] : tree_) {
            if (!used_.count(key))
                throw ScenarioError("[" + name_ + "] unknown key '" + key + "'");
        }
    }

private:
    std::string name_;
    const pt::ptree& tree_;
    std::set<std::string> used_;
};

int parse_pcp(const std::string& v)
{
    const auto p = parse_int(v);
    if (p < 0 || p > 7)
        throw ScenarioError("pcp must be in 0..7, got " + v);
    return static_cast<int>(p);
}

bool valid_name(const std::string& n)
{
    return !n.empty() && std::all_of(n.begin(), n.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

void apply_override(pt::ptree& tree, const std::string& spec, std::vector<std::string>* log)
{
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ScenarioError("override '" + spec + "': expected section.key=value");
    const auto path = trim(std::string_view(spec).substr(0, eq));
    const auto value = trim(std::string_view(spec).substr(eq + 1));
    const auto dot = path.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
        throw ScenarioError("override '" + spec + "': expected section.key=value");
    const auto section = path.substr(0, dot);
    const auto key = path.substr(dot + 1);

    auto it = tree.find(section);
    auto& sec = it == tree.not_found() ? tree.push_back({section, pt::ptree()})->second : it->second;
    const auto old = sec.get_optional<std::string>(pt::ptree::path_type(key, '/'));
    sec.put(pt::ptree::path_type(key, '/'), value);
    if (log)
        log->push_back("override [" + section + "] " + key + ": " + (old ? trim(*old) : std::string("(unset)")) + " -> " +
                       value);
}

void parse_scenario_section(Section& s, Scenario& sc)
{
    s.field("name", [&](const std::string& v) { sc.name = v; });
    s.field("epoch", [&](const std::string& v) { sc.epoch = parse_int(v); });
    s.field("duration", [&](const std::string& v) { sc.duration = parse_duration(v, kSecond); });
    s.field("seed", [&](const std::string& v) { sc.seed = parse_uint(v); });
}

void parse_topology(Section& s, Scenario& sc)
{
    s.require("chain");
    s.field("chain", [&](const std::string& v) { sc.chain = parse_list(v); });
    s.field("rate", [&](const std::string& v) { sc.rate_bps = parse_rate(v); });
    s.field("propagation", [&](const std::string& v) { sc.propagation = parse_duration(v); });
    s.field("queue_capacity", [&](const std::string& v) { sc.queue_capacity = parse_uint(v); });
}

void parse_clocks(Section& s, Scenario& sc)
{
    s.field("drift_ppm", [&](const std::string& v) { sc.clocks.drift_ppm = parse_distribution(v, ValueKind::Scalar); });
    s.field("offset", [&](const std::string& v) { sc.clocks.offset = parse_distribution(v, ValueKind::Time); });
    s.field("wander_ppm", [&](const std::string& v) { sc.clocks.wander_ppm = parse_double(v); });
    s.field("jitter", [&](const std::string& v) { sc.clocks.jitter_ns = static_cast<double>(parse_duration(v)); });
}

void parse_clock(Section& s, ClockOverride& c)
{
    s.field("drift_ppm", [&](const std::string& v) { c.drift_ppm = parse_double(v); });
    s.field("offset", [&](const std::string& v) { c.offset = parse_duration(v); });
    s.field("wander_ppm", [&](const std::string& v) { c.wander_ppm = parse_double(v); });
    s.field("jitter", [&](const std::string& v) { c.jitter_ns = static_cast<double>(parse_duration(v)); });
}

void parse_ptp(Section& s, PtpSpec& p)
{
    s.field("enabled", [&](const std::string& v) { p.enabled = parse_bool(v); });
    s.field("master", [&](const std::string& v) { p.master = v; });
    s.field("slaves", [&](const std::string& v) { p.slaves = parse_list(v); });
    s.field("sync_interval", [&](const std::string& v) { p.sync_interval = parse_duration(v); });
    s.field("delay_req_interval", [&](const std::string& v) { p.delay_req_interval = parse_duration(v); });
    s.field("stamp_noise", [&](const std::string& v) { p.stamp_noise = parse_distribution(v, ValueKind::Time); });
    s.field("kp", [&](const std::string& v) { p.kp = parse_double(v); });
    s.field("ki", [&](const std::string& v) { p.ki = parse_double(v); });
    s.field("step_threshold", [&](const std::string& v) { p.step_threshold = parse_duration(v); });
}

void parse_stack(Section& s, pubsub::StackModel& m)
{
    s.field("publish_latency", [&](const std::string& v) { m.publish_latency = parse_distribution(v, ValueKind::Time); });
    s.field("subscribe_latency",
            [&](const std::string& v) { m.subscribe_latency = parse_distribution(v, ValueKind::Time); });
    s.field("stamp_noise", [&](const std::string& v) { m.stamp_noise = parse_distribution(v, ValueKind::Time); });
}

void parse_priority(Section& s, PriorityMap& p)
{
    s.field("ptp", [&](const std::string& v) { p.ptp = parse_pcp(v); });
    s.field("topic", [&](const std::string& v) { p.topic = parse_pcp(v); });
    s.field("background", [&](const std::string& v) { p.background = parse_pcp(v); });
}

void parse_publisher(Section& s, PublisherSpec& p)
{
    s.require("node");
    s.field("node", [&](const std::string& v) { p.node = v; });
    s.field("subscriber", [&](const std::string& v) { p.subscriber = v; });
    s.field("period", [&](const std::string& v) { p.period = parse_duration(v); });
    s.field("timer", [&](const std::string& v) { p.timer = pubsub::timer_mode_from_string(v); });
    s.field("exec_time", [&](const std::string& v) { p.exec_time = parse_distribution(v, ValueKind::Time); });
    s.field("size", [&](const std::string& v) { p.size = static_cast<std::uint32_t>(parse_uint(v)); });
    s.field("pcp", [&](const std::string& v) { p.pcp = parse_pcp(v); });
    s.field("offset", [&](const std::string& v) { p.offset = parse_duration(v); });
}

void parse_traffic(Section& s, TrafficSpec& t)
{
    s.require("src");
    s.require("dst");
    s.field("src", [&](const std::string& v) { t.src = v; });
    s.field("dst", [&](const std::string& v) { t.dst = v; });
    s.field("load", [&](const std::string& v) { t.load = parse_double(v); });
    s.field("size", [&](const std::string& v) { t.size = static_cast<std::uint32_t>(parse_uint(v)); });
    s.field("pattern", [&](const std::string& v) { t.pattern = netsim::traffic_pattern_from_string(v); });
    s.field("pcp", [&](const std::string& v) { t.pcp = parse_pcp(v); });
}

void parse_qbv(Section& s, QbvSpec& q)
{
    s.require("toward");
    s.require("entries");
    s.field("toward", [&](const std::string& v) { q.toward = v; });
    s.field("enabled", [&](const std::string& v) { q.enabled = parse_bool(v); });
    s.field("cycle", [&](const std::string& v) { q.cycle = parse_duration(v); });
    s.field("base_time", [&](const std::string& v) { q.base_time = parse_duration(v); });
    s.field("entries", [&](const std::string& v) { q.entries = parse_gate_entries(v); });
}

Scenario parse_tree(const pt::ptree& tree)
{
    Scenario sc;
    bool have_topology = false;
    for (const auto& [name, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ScenarioError("key '" + name + "' outside of any section");
        Section s(name, body);
        const auto dot = name.find('.');
        const auto kind = name.substr(0, dot);
        const auto id = dot == std::string::npos ? std::string() : name.substr(dot + 1);
        const bool keyed = kind == "clock" || kind == "link" || kind == "publisher" || kind == "traffic" || kind == "qbv";
        if (keyed && id.empty())
            throw ScenarioError("[" + name + "] section needs a name, e.g. [" + kind + ".x]");
        if (!keyed && !id.empty())
            throw ScenarioError("unknown section [" + name + "]");

        if (kind == "scenario") {
            parse_scenario_section(s, sc);
        } else if (kind == "topology") {
            parse_topology(s, sc);
            have_topology = true;
        } else if (kind == "link") {
            LinkSpec l;
            s.field("rate", [&](const std::string& v) { l.rate_bps = parse_rate(v); });
            s.field("propagation", [&](const std::string& v) { l.propagation = parse_duration(v); });
            sc.links[id] = l;
        } else if (kind == "clocks") {
            parse_clocks(s, sc);
        } else if (kind == "clock") {
            parse_clock(s, sc.clock_overrides[id]);
        } else if (kind == "ptp") {
            parse_ptp(s, sc.ptp);
        } else if (kind == "stack") {
            parse_stack(s, sc.stack);
        } else if (kind == "priority") {
            parse_priority(s, sc.priority);
        } else if (kind == "publisher") {
            PublisherSpec p;
            p.topic = id;
            parse_publisher(s, p);
            sc.publishers.push_back(std::move(p));
        } else if (kind == "traffic") {
            TrafficSpec t;
            t.name = id;
            parse_traffic(s, t);
            sc.traffic.push_back(std::move(t));
        } else if (kind == "qbv") {
            QbvSpec q;
            q.node = id;
            parse_qbv(s, q);
            sc.qbv.push_back(std::move(q));
        } else if (kind == "output") {
            s.field("frame_trace", [&](const std::string& v) { sc.frame_trace = parse_bool(v); });
        } else {
            throw ScenarioError("unknown section [" + name + "]");
        }
        s.finish();
    }
    if (!have_topology)
        throw ScenarioError("[topology] section missing");
    return sc;
}

} // namespace

std::vector<netsim::GateEntry> parse_gate_entries(std::string_view text)
{
    std::vector<netsim::GateEntry> out;
    for (const auto& item : parse_list(text)) {
        const auto a = item.find(':');
        const auto b = a == std::string::npos ? a : item.find(':', a + 1);
        if (b == std::string::npos)
            throw ScenarioError("gate entry '" + item + "': expected start:duration:mask");
        const auto mask = parse_uint(item.substr(b + 1));
        if (mask > 0xFF)
            throw ScenarioError("gate entry '" + item + "': mask must fit in 8 bits");
        out.push_back({parse_duration(item.substr(0, a)), parse_duration(item.substr(a + 1, b - a - 1)),
                       static_cast<std::uint8_t>(mask)});
    }
    return out;
}

std::string format_gate_entries(const std::vector<netsim::GateEntry>& entries)
{
    std::vector<std::string> items;
    for (const auto& e : entries)
        items.push_back(format_duration(e.start) + ":" + format_duration(e.duration) + ":" + format_hex(e.open_mask));
    return format_list(items);
}

Scenario load_scenario(const std::string& ini_text, const std::vector<std::string>& overrides,
                       std::vector<std::string>* log)
{
    pt::ptree tree;
    std::istringstream in(ini_text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ScenarioError("scenario syntax error at line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& o : overrides)
        apply_override(tree, o, log);
    auto sc = parse_tree(tree);
    validate(sc);
    return sc;
}

void validate(const Scenario& s)
{
    const auto fail = [](const std::string& field, const std::string& why) {
        throw ScenarioError(field + ": " + why);
    };
    if (s.name.empty())
        fail("[scenario] name", "must not be empty");
    if (s.duration <= 0)
        fail("[scenario] duration", "must be positive");
    if (s.duration > 100'000 * kSecond)
        fail("[scenario] duration", "must not exceed 100000s");

    if (s.chain.size() < 2)
        fail("[topology] chain", "needs at least two nodes");
    std::set<std::string> nodes;
    for (const auto& n : s.chain) {
        if (!valid_name(n))
            fail("[topology] chain", "node name '" + n + "' must be letters, digits or '_'");
        if (!nodes.insert(n).second)
            fail("[topology] chain", "duplicate node '" + n + "'");
    }
    const auto index_of = [&](const std::string& n) {
        return static_cast<long>(std::find(s.chain.begin(), s.chain.end(), n) - s.chain.begin());
    };
    const auto need_node = [&](const std::string& field, const std::string& n) {
        if (!nodes.count(n))
            fail(field, "unknown node '" + n + "'");
    };
    if (s.propagation < 0)
        fail("[topology] propagation", "must be non-negative");
    if (s.queue_capacity == 0)
        fail("[topology] queue_capacity", "must be positive");
    for (const auto& [id, l] : s.links) {
        const auto dash = id.find('-');
        const std::string field = "[link." + id + "]";
        if (dash == std::string::npos)
            fail(field, "section name must be link.<a>-<b>");
        const auto a = id.substr(0, dash);
        const auto b = id.substr(dash + 1);
        need_node(field, a);
        need_node(field, b);
        if (std::abs(index_of(a) - index_of(b)) != 1)
            fail(field, "'" + a + "' and '" + b + "' are not adjacent in the chain");
        if (l.propagation && *l.propagation < 0)
            fail(field + " propagation", "must be non-negative");
    }

    if (s.clocks.drift_ppm.lower_bound() <= -1000 || s.clocks.drift_ppm.upper_bound() >= 1000)
        fail("[clocks] drift_ppm", "must stay within (-1000, 1000) ppm");
    if (!(s.clocks.wander_ppm >= 0))
        fail("[clocks] wander_ppm", "must be non-negative");
    if (s.clocks.jitter_ns < 0)
        fail("[clocks] jitter", "must be non-negative");
    for (const auto& [node, c] : s.clock_overrides) {
        const std::string field = "[clock." + node + "]";
        need_node(field, node);
        if (c.drift_ppm && std::abs(*c.drift_ppm) >= 1000)
            fail(field + " drift_ppm", "must stay within (-1000, 1000) ppm");
        if (c.wander_ppm && *c.wander_ppm < 0)
            fail(field + " wander_ppm", "must be non-negative");
        if (c.jitter_ns && *c.jitter_ns < 0)
            fail(field + " jitter", "must be non-negative");
    }

    if (s.ptp.enabled) {
        need_node("[ptp] master", s.ptp.master);
        if (s.ptp.slaves.empty())
            fail("[ptp] slaves", "at least one slave required when ptp is enabled");
        std::set<std::string> seen;
        for (const auto& n : s.ptp.slaves) {
            need_node("[ptp] slaves", n);
            if (n == s.ptp.master)
                fail("[ptp] slaves", "master '" + n + "' cannot also be a slave");
            if (!seen.insert(n).second)
                fail("[ptp] slaves", "duplicate slave '" + n + "'");
        }
        if (s.ptp.sync_interval <= 10 * kMillisecond)
            fail("[ptp] sync_interval", "must exceed the 10ms delay-request spread");
        if (s.ptp.delay_req_interval <= 0)
            fail("[ptp] delay_req_interval", "must be positive");
        if (s.ptp.kp < 0 || s.ptp.ki < 0)
            fail("[ptp] kp/ki", "gains must be non-negative");
        if (s.ptp.step_threshold <= 0)
            fail("[ptp] step_threshold", "must be positive");
    }

    if (s.stack.publish_latency.lower_bound() < 0)
        fail("[stack] publish_latency", "must be non-negative");
    if (s.stack.subscribe_latency.lower_bound() < 0)
        fail("[stack] subscribe_latency", "must be non-negative");
    if (s.stack.stamp_noise.lower_bound() < 0)
        fail("[stack] stamp_noise", "software stamp noise must be non-negative");

    std::set<std::string> topics;
    for (const auto& p : s.publishers) {
        const std::string field = "[publisher." + p.topic + "]";
        if (!topics.insert(p.topic).second)
            fail(field, "duplicate topic");
        need_node(field + " node", p.node);
        need_node(field + " subscriber", p.subscriber);
        if (p.period <= 0)
            fail(field + " period", "must be positive");
        if (p.exec_time.lower_bound() < 0)
            fail(field + " exec_time", "must be non-negative");
        if (p.size == 0 || p.size > netsim::kMaxPayload)
            fail(field + " size", "must be 1..1500 bytes (one frame per message, no fragmentation)");
        if (p.offset < 0)
            fail(field + " offset", "must be non-negative");
        if (p.timer == pubsub::TimerMode::Absolute && p.offset >= p.period)
            fail(field + " offset", "absolute-timer phase must be below the period");
    }

    std::set<std::string> gens;
    for (const auto& t : s.traffic) {
        const std::string field = "[traffic." + t.name + "]";
        gens.insert(t.name);
        need_node(field + " src", t.src);
        need_node(field + " dst", t.dst);
        if (t.src == t.dst)
            fail(field, "src and dst must differ");
        if (!(t.load >= 0 && t.load <= 1))
            fail(field + " load", "must be in [0, 1]");
        if (t.size == 0 || t.size > netsim::kMaxPayload)
            fail(field + " size", "must be 1..1500 bytes");
    }

    std::set<std::string> gated;
    for (const auto& q : s.qbv) {
        const std::string field = "[qbv." + q.node + "]";
        need_node(field, q.node);
        need_node(field + " toward", q.toward);
        if (std::abs(index_of(q.node) - index_of(q.toward)) != 1)
            fail(field + " toward", "'" + q.toward + "' is not a neighbor of '" + q.node + "'");
        try {
            netsim::GateControlList(q.cycle, q.entries, q.base_time);
        } catch (const std::invalid_argument& e) {
            fail(field + " entries", e.what());
        }
    }
}

std::string canonical_ini(const Scenario& s)
{
    std::ostringstream o;
    o << "[scenario]\n"
      << "name = " << s.name << '\n'
      << "epoch = " << s.epoch << '\n'
      << "duration = " << format_duration(s.duration) << '\n'
      << "seed = " << format_hex(s.seed) << '\n';

    o << "\n[topology]\n"
      << "chain = " << format_list(s.chain) << '\n'
      << "rate = " << format_rate(s.rate_bps) << '\n'
      << "propagation = " << format_duration(s.propagation) << '\n'
      << "queue_capacity = " << s.queue_capacity << '\n';

    for (const auto& [id, l] : s.links) {
        o << "\n[link." << id << "]\n";
        if (l.rate_bps)
            o << "rate = " << format_rate(*l.rate_bps) << '\n';
        if (l.propagation)
            o << "propagation = " << format_duration(*l.propagation) << '\n';
    }

    o << "\n[clocks]\n"
      << "drift_ppm = " << format_distribution(s.clocks.drift_ppm, ValueKind::Scalar) << '\n'
      << "offset = " << format_distribution(s.clocks.offset, ValueKind::Time) << '\n'
      << "wander_ppm = " << format_double(s.clocks.wander_ppm) << '\n'
      << "jitter = " << format_duration(static_cast<Duration>(s.clocks.jitter_ns)) << '\n';

    for (const auto& [node, c] : s.clock_overrides) {
        o << "\n[clock." << node << "]\n";
        if (c.drift_ppm)
            o << "drift_ppm = " << format_double(*c.drift_ppm) << '\n';
        if (c.offset)
            o << "offset = " << format_duration(*c.offset) << '\n';
        if (c.wander_ppm)
            o << "wander_ppm = " << format_double(*c.wander_ppm) << '\n';
        if (c.jitter_ns)
            o << "jitter = " << format_duration(static_cast<Duration>(*c.jitter_ns)) << '\n';
    }

    o << "\n[ptp]\n"
      << "enabled = " << (s.ptp.enabled ? "true" : "false") << '\n'
      << "master = " << s.ptp.master << '\n'
      << "slaves = " << format_list(s.ptp.slaves) << '\n'
      << "sync_interval = " << format_duration(s.ptp.sync_interval) << '\n'
      << "delay_req_interval = " << format_duration(s.ptp.delay_req_interval) << '\n'
      << "stamp_noise = " << format_distribution(s.ptp.stamp_noise, ValueKind::Time) << '\n'
      << "kp = " << format_double(s.ptp.kp) << '\n'
      << "ki = " << format_double(s.ptp.ki) << '\n'
      << "step_threshold = " << format_duration(s.ptp.step_threshold) << '\n';

    o << "\n[stack]\n"
      << "publish_latency = " << format_distribution(s.stack.publish_latency, ValueKind::Time) << '\n'
      << "subscribe_latency = " << format_distribution(s.stack.subscribe_latency, ValueKind::Time) << '\n'
      << "stamp_noise = " << format_distribution(s.stack.stamp_noise, ValueKind::Time) << '\n';

    o << "\n[priority]\n"
      << "ptp = " << s.priority.ptp << '\n'
      << "topic = " << s.priority.topic << '\n'
      << "background = " << s.priority.background << '\n';

    for (const auto& p : s.publishers) {
        o << "\n[publisher." << p.topic << "]\n"
          << "node = " << p.node << '\n'
          << "subscriber = " << p.subscriber << '\n'
          << "period = " << format_duration(p.period) << '\n'
          << "timer = " << pubsub::to_string(p.timer) << '\n'
          << "exec_time = " << format_distribution(p.exec_time, ValueKind::Time) << '\n'
          << "size = " << p.size << '\n';
        if (p.pcp)
            o << "pcp = " << *p.pcp << '\n';
        o << "offset = " << format_duration(p.offset) << '\n';
    }

    for (const auto& t : s.traffic) {
        o << "\n[traffic." << t.name << "]\n"
          << "src = " << t.src << '\n'
          << "dst = " << t.dst << '\n'
          << "load = " << format_double(t.load) << '\n'
          << "size = " << t.size << '\n'
          << "pattern = " << netsim::to_string(t.pattern) << '\n';
        if (t.pcp)
            o << "pcp = " << *t.pcp << '\n';
    }

    for (const auto& q : s.qbv) {
        o << "\n[qbv." << q.node << "]\n"
          << "toward = " << q.toward << '\n'
          << "enabled = " << (q.enabled ? "true" : "false") << '\n'
          << "cycle = " << format_duration(q.cycle) << '\n'
          << "base_time = " << format_duration(q.base_time) << '\n'
          << "entries = " << format_gate_entries(q.entries) << '\n';
    }

    o << "\n[output]\nframe_trace = " << (s.frame_trace ? "true" : "false") << '\n';
    return o.str();
}

} // namespace chainsync::scenario
