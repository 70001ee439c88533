#include "chainsync/scenario/bundle.hpp"
#include "chainsync/scenario/presets.hpp"
#include "chainsync/scenario/runner.hpp"
#include "chainsync/scenario/scenario.hpp"
#include "chainsync/scenario/values.hpp"

#include "properties.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chainsync;
using namespace chainsync::scenario;
namespace fs = std::filesystem;

namespace {

constexpr const char* kTwoNode = R"(
[scenario]
name = two-node
duration = 3s
seed = 7

[topology]
chain = controller, m1

[clock.m1]
drift_ppm = 10

[publisher.motor1]
node = m1
period = 100ms
timer = absolute
)";

std::string read(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(const std::string& ini, const std::vector<std::string>& overrides = {})
{
    try {
        (void)load_scenario(ini, overrides);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return {};
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("chainsync-test-" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("value parsing")
{
    CHECK(parse_duration("100ms") == 100 * kMillisecond);
    CHECK(parse_duration("1.5s") == 1500 * kMillisecond);
    CHECK(parse_duration("-2ms") == -2 * kMillisecond);
    CHECK(parse_duration("10min") == 600 * kSecond);
    CHECK(parse_duration("250ns") == 250);
    CHECK(parse_duration("10", kSecond) == 10 * kSecond);
    CHECK_THROWS_AS((void)parse_duration("10"), ScenarioError);
    CHECK_THROWS_AS((void)parse_duration("10 parsecs"), ScenarioError);
    CHECK(format_duration(100 * kMillisecond) == "100ms");
    CHECK(format_duration(124'640) == "124640ns");
    CHECK(format_duration(0) == "0ns");

    CHECK(parse_rate("1Gbps") == 1'000'000'000);
    CHECK(parse_rate("100Mbps") == 100'000'000);
    CHECK(format_rate(100'000'000) == "100Mbps");

    CHECK(parse_uint("0xC0B07") == 0xC0B07);
    CHECK(format_hex(0xC0B07) == "0xC0B07");
    CHECK(parse_bool("true"));
    CHECK_FALSE(parse_bool("false"));
    CHECK(parse_list(" a, b ,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK_THROWS_AS((void)parse_list("a,,b"), ScenarioError);

    CHECK(parse_distribution("uniform(-2ms, 2ms)", ValueKind::Time) ==
          Distribution::uniform(-2.0 * kMillisecond, 2.0 * kMillisecond));
    CHECK(parse_distribution("lognormal(150us, 0.3, 400us)", ValueKind::Time) ==
          Distribution::lognormal(150'000, 0.3, 400'000));
    CHECK(parse_distribution("42", ValueKind::Scalar) == Distribution::constant(42));
    CHECK(format_distribution(Distribution::normal(0, 50), ValueKind::Time) == "normal(0ns, 50ns)");
    CHECK_THROWS_AS((void)parse_distribution("normal(0ns, -1ns)", ValueKind::Time), ScenarioError);
    CHECK_THROWS_AS((void)parse_distribution("cauchy(1, 2)", ValueKind::Scalar), ScenarioError);

    const auto gates = parse_gate_entries("0us:100us:0xA0, 100us:9900us:0xDF");
    REQUIRE(gates.size() == 2);
    CHECK(gates[1] == netsim::GateEntry{100'000, 9'900'000, 0xDF});
    CHECK(format_gate_entries(gates) == "0ns:100us:0xA0, 100us:9900us:0xDF");
}

TEST_CASE("scenario file parsing")
{
    const auto s = load_scenario(kTwoNode);
    CHECK(s.name == "two-node");
    CHECK(s.duration == 3 * kSecond);
    CHECK(s.seed == 7);
    CHECK(s.epoch == kDefaultEpoch);
    CHECK(s.chain == std::vector<std::string>{"controller", "m1"});
    REQUIRE(s.publishers.size() == 1);
    CHECK(s.publishers[0].timer == pubsub::TimerMode::Absolute);
    CHECK(s.publishers[0].subscriber == "controller");
    REQUIRE(s.clock_overrides.count("m1"));
    CHECK(*s.clock_overrides.at("m1").drift_ppm == 10);
    CHECK(load_scenario(canonical_ini(s)) == s);
}

TEST_CASE("overrides win and are logged")
{
    std::vector<std::string> log;
    const auto s = load_scenario(kTwoNode, {"scenario.duration=10s", "publisher.motor1.period=50ms"}, &log);
    CHECK(s.duration == 10 * kSecond);
    CHECK(s.publishers[0].period == 50 * kMillisecond);
    REQUIRE(log.size() == 2);
    CHECK(log[0] == "override [scenario] duration: 3s -> 10s");

    const auto p = load_preset("ptp-sync", {"scenario.duration=10s"});
    auto base = load_preset("ptp-sync");
    CHECK(p.duration == 10 * kSecond);
    base.duration = p.duration;
    CHECK(base == p);
}

TEST_CASE("schema violations name the field")
{
    CHECK(error_of(kTwoNode, {"publisher.motor1.period=0ms"}).find("period") != std::string::npos);
    CHECK(error_of(std::string(kTwoNode) + "\n[ptp]\nbogus = 1\n").find("bogus") != std::string::npos);
    CHECK(error_of(std::string(kTwoNode) + "\n[nonsense]\nx = 1\n").find("nonsense") != std::string::npos);
    CHECK(error_of(kTwoNode, {"publisher.motor1.node=m9"}).find("m9") != std::string::npos);
    CHECK(error_of(kTwoNode, {"clocks.drift_ppm=uniform(-2000, 10)"}) != "");
    CHECK(error_of(kTwoNode, {"noequals"}) != "");
    CHECK(error_of(kTwoNode, {"scenario.duration=-1s"}) != "");
    CHECK_THROWS_AS((void)load_preset("no-such-preset"), ScenarioError);
}

TEST_CASE("ptp-sync preset shape")
{
    const auto s = load_preset("ptp-sync");
    CHECK(s.ptp.enabled);
    CHECK(s.ptp.master == "controller");
    CHECK(s.ptp.slaves.size() == 4);
    REQUIRE(s.publishers.size() == 4);
    int motors = 0;
    for (const auto& p : s.publishers) {
        CHECK(p.timer == pubsub::TimerMode::Absolute);
        CHECK(p.period == 100 * kMillisecond);
        motors += p.topic.rfind("motor", 0) == 0 ? 1 : 0;
    }
    CHECK(motors == 3);
    CHECK(s.duration == 600 * kSecond);
    CHECK(s.seed == 0xC0B07);
}

TEST_CASE("preset golden files")
{
    REQUIRE(presets().size() == 6);
    for (const auto& p : presets()) {
        CAPTURE(p.id);
        const auto s = load_preset(p.id);
        const auto golden = read(fs::path(CHAINSYNC_GOLDEN_DIR) / (p.id + ".ini"));
        CHECK(canonical_ini(s) == golden);
        CHECK(load_scenario(golden) == s);
    }
}

TEST_CASE("qbv preset gates the range finder")
{
    const auto s = load_preset("qbv-range-finder");
    REQUIRE(s.qbv.size() == 1);
    CHECK(s.qbv[0].node == "rf");
    CHECK(s.qbv[0].cycle == 10 * kMillisecond);
    CHECK(s.qbv[0].base_time == 0);
    for (const auto& p : s.publishers) {
        if (p.topic == "range") {
            CHECK(p.period == 10 * kMillisecond);
            CHECK(*p.pcp == 5);
        }
    }
}

TEST_CASE("run, bundle and compare")
{
    const auto s = load_scenario(kTwoNode);
    const auto a = scratch("a");
    const auto b = scratch("b");
    const auto r1 = run_scenario(s);
    const auto r2 = run_scenario(s);
    CHECK(r1.exit_code == kExitOk);
    CHECK(r1.data.event_digest == r2.data.event_digest);
    write_bundle(a, s, r1);
    write_bundle(b, s, r2);
    for (const auto* f : {"scenario.ini", "trace.csv", "report.txt", "dt_pub.csv", "dt_sub.csv", "latency.csv",
                          "ptp_offsets.csv", "ptp_max_offset.csv", "histograms.csv"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(a / f));
        CHECK(read(a / f) == read(b / f));
    }
    CHECK(read(a / "report.txt").find("seed = 0x7") != std::string::npos);

    const auto same = compare_bundles(a, b);
    CHECK(same.identical);

    const auto other = load_scenario(kTwoNode, {"scenario.seed=8"});
    const auto c = scratch("c");
    write_bundle(c, other, run_scenario(other));
    CHECK_FALSE(compare_bundles(a, c).identical);

    const auto wide = load_scenario(std::string(kTwoNode), {"topology.chain=controller, sw, m1"});
    const auto d = scratch("d");
    write_bundle(d, wide, run_scenario(wide));
    CHECK_THROWS_AS((void)compare_bundles(a, d), BundleMismatch);
    CHECK_THROWS((void)compare_bundles(a, scratch("missing")));
}

TEST_CASE("same-seed preset runs write identical bundles")
{
    const auto dir = scratch("determinism");
    for (const auto* id : {"ptp-sync", "qbv-range-finder"}) {
        const auto r = testing::bundle_determinism(id, 5 * kSecond, dir);
        INFO(r.detail);
        CHECK(r.pass);
    }
}
