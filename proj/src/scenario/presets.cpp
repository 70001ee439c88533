#include "chainsync/scenario/presets.hpp"

namespace chainsync::scenario {

namespace {

// Shared by every preset: the arm (three motor modules and a range finder
// behind the controller), clock population, stack model and class map.
constexpr std::string_view kCommon = R"(
[clocks]
drift_ppm = uniform(-10, 10)
offset = uniform(-2ms, 2ms)
wander_ppm = 0.002
jitter = 0ns

[stack]
publish_latency = lognormal(150us, 0.3, 400us)
subscribe_latency = lognormal(1100us, 0.12, 1600us)
stamp_noise = lognormal(15us, 0.45, 60us)
)";

constexpr std::string_view kArm = R"(
[topology]
chain = controller, m1, m2, m3, rf
rate = 1Gbps
propagation = 50ns
)";

constexpr std::string_view kCongestedArm = R"(
[topology]
chain = controller, sw, m1, m2, m3, rf
rate = 100Mbps
propagation = 50ns

[traffic.bg]
src = sw
dst = controller
load = 0.9
size = 1500
pattern = poisson
)";

constexpr std::string_view kPtpOn = R"(
[ptp]
enabled = true
master = controller
slaves = m1, m2, m3, rf
sync_interval = 125ms
delay_req_interval = 1s
stamp_noise = normal(0ns, 50ns)
kp = 0.7
ki = 0.3
)";

std::string publishers(std::string_view motor_timer, std::string_view range_timer, std::string_view range_period)
{
    std::string s;
    for (const auto& [topic, node] : {std::pair{"motor1", "m1"}, {"motor2", "m2"}, {"motor3", "m3"}}) {
        s += "\n[publisher." + std::string(topic) + "]\nnode = " + node +
             "\nsubscriber = controller\nperiod = 100ms\ntimer = " + std::string(motor_timer) +
             "\nexec_time = constant(1ms)\nsize = 256\n";
    }
    s += "\n[publisher.range]\nnode = rf\nsubscriber = controller\nperiod = " + std::string(range_period) +
         "\ntimer = " + std::string(range_timer) + "\nexec_time = constant(1ms)\nsize = 512\n";
    return s;
}

std::string head(std::string_view name)
{
    return "[scenario]\nname = " + std::string(name) + "\nepoch = 1535967970000000000\nduration = 600s\nseed = 0xC0B07\n";
}

std::vector<Preset> build()
{
    std::vector<Preset> v;
    v.push_back({"unsync-relative", "relative timers, free-running clocks",
                 head("unsync-relative") + std::string(kArm) + std::string(kCommon) +
                     publishers("relative", "relative", "100ms")});
    v.push_back({"unsync-absolute", "absolute timers, free-running clocks",
                 head("unsync-absolute") + std::string(kArm) + std::string(kCommon) +
                     publishers("absolute", "absolute", "100ms")});
    v.push_back({"ptp-sync", "absolute timers, PTP-disciplined clocks",
                 head("ptp-sync") + std::string(kArm) + std::string(kCommon) + std::string(kPtpOn) +
                     publishers("absolute", "absolute", "100ms")});
    v.push_back({"congestion-90", "PTP on, 90% background load on a 100 Mbps hop, topics best effort",
                 head("congestion-90") + std::string(kCongestedArm) + std::string(kCommon) + std::string(kPtpOn) +
                     "\n[priority]\nptp = 7\ntopic = 0\nbackground = 0\n" +
                     publishers("absolute", "absolute", "100ms")});
    v.push_back({"congestion-90-cos", "as congestion-90 with topic frames in class 6",
                 head("congestion-90-cos") + std::string(kCongestedArm) + std::string(kCommon) + std::string(kPtpOn) +
                     "\n[priority]\nptp = 7\ntopic = 6\nbackground = 0\n" +
                     publishers("absolute", "absolute", "100ms")});
    v.push_back({"qbv-range-finder",
                 "PTP on, range finder every 10ms in class 5, gated to the first 100us of each 10ms cycle",
                 head("qbv-range-finder") + std::string(kArm) + std::string(kCommon) + std::string(kPtpOn) +
                     publishers("absolute", "relative", "10ms") + R"(pcp = 5

[qbv.rf]
toward = m3
enabled = true
cycle = 10ms
base_time = 0ns
entries = 0us:100us:0xA0, 100us:9900us:0xDF
)"});
    return v;
}

} // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = build();
    return all;
}

const Preset* find_preset(std::string_view id)
{
    for (const auto& p : presets()) {
        if (p.id == id)
            return &p;
    }
    return nullptr;
}

Scenario load_preset(std::string_view id, const std::vector<std::string>& overrides, std::vector<std::string>* log)
{
    const auto* p = find_preset(id);
    if (!p) {
        std::string known;
        for (const auto& q : presets())
            known += (known.empty() ? "" : ", ") + q.id;
        throw ScenarioError("unknown preset '" + std::string(id) + "' (known: " + known + ")");
    }
    return load_scenario(p->ini, overrides, log);
}

} // namespace chainsync::scenario
