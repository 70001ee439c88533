#include "chainsync/netsim/traffic.hpp"
#include "chainsync/ptp/delay_filter.hpp"
#include "chainsync/ptp/exchange.hpp"
#include "chainsync/ptp/offset_stats.hpp"
#include "chainsync/ptp/protocol.hpp"
#include "chainsync/ptp/servo.hpp"

#include "properties.hpp"

#include <doctest.h>

#include <cmath>
#include <deque>

using namespace chainsync;
using namespace chainsync::ptp;

TEST_CASE("offset and delay from four stamps")
{
    SyncSample s{0, 1500, 2000, 1500};
    auto r = compute_offset_delay(s);
    REQUIRE(r);
    CHECK(r->offset == 1000);
    CHECK(r->mean_path_delay == 500);

    r = compute_offset_delay(SyncSample{0, 0, 0, 0});
    REQUIRE(r);
    CHECK(r->offset == 0);
    CHECK(r->mean_path_delay == 0);

    // d_ms = 600, d_sm = 400, no true offset.
    r = compute_offset_delay(SyncSample{0, 600, 1000, 1400});
    REQUIRE(r);
    CHECK(r->offset == 100);
    CHECK(r->mean_path_delay == 500);

    CHECK_FALSE(compute_offset_delay(SyncSample{0, 600, std::nullopt, 1400}));
}

TEST_CASE("offset/delay exactness and asymmetry bias over 1e4 samples")
{
    const auto r = testing::offset_delay_exactness(0xC0B07, 10000);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("servo step and fixed point")
{
    PiServo servo;
    auto out = servo.update(-3 * kMillisecond, 125 * kMillisecond);
    CHECK(out.stepped);
    CHECK(out.phase_step == 3 * kMillisecond);
    CHECK(out.freq_adjust_ppm == 0);

    PiServo idle;
    out = idle.update(0, 125 * kMillisecond);
    CHECK_FALSE(out.stepped);
    CHECK(out.phase_step == 0);
    CHECK(out.freq_adjust_ppm == 0);
    CHECK(idle.integrator() == 0);

    CHECK_THROWS_AS(idle.update(0, 0), std::invalid_argument);
}

TEST_CASE("servo PI arithmetic")
{
    PiServo servo;
    // 1250 ns over 125 ms is 10 ppm.
    const auto out = servo.update(1250, 125 * kMillisecond);
    CHECK(servo.integrator() == doctest::Approx(3.0));
    CHECK(out.freq_adjust_ppm == doctest::Approx(-10.0));
}

TEST_CASE("servo closed loop against a 10 ppm oscillator")
{
    // Noise-free exchange every 125 ms, starting 50 us off.
    const Duration interval = 125 * kMillisecond;
    PiServo servo;
    double theta = 50'000;
    double freq = 0;
    std::vector<Duration> seen;
    int lock_update = 0;
    for (int k = 1; k <= 2000; ++k) {
        const auto offset = static_cast<Duration>(std::llround(theta));
        seen.push_back(offset);
        const auto out = servo.update(offset, interval);
        theta += static_cast<double>(out.phase_step);
        freq = out.freq_adjust_ppm;
        theta += (10 + freq) * 1e-6 * static_cast<double>(interval);
        if (servo.locked() && lock_update == 0)
            lock_update = k;
    }
    std::size_t settled = seen.size();
    while (settled > 0 && std::llabs(seen[settled - 1]) < kMicrosecond)
        --settled;
    // Golden values from an independent recurrence.
    CHECK(settled + 1 == 4);
    CHECK(lock_update == 8);
    CHECK(servo.lock_losses() == 0);
    CHECK(servo.steps() == 1);
    // Offsets are whole ns, so the integrator settles within rounding of 10 ppm.
    CHECK(freq == doctest::Approx(-10.0).epsilon(1e-3));
}

TEST_CASE("servo lock loss")
{
    PiServo servo;
    for (int i = 0; i < 5; ++i)
        (void)servo.update(0, 125 * kMillisecond);
    REQUIRE(servo.locked());
    // Above the step threshold while locked: lock lost, then a step.
    const auto out = servo.update(20 * kMicrosecond, 125 * kMillisecond);
    CHECK_FALSE(servo.locked());
    CHECK(servo.lock_losses() == 1);
    CHECK(out.stepped);
    CHECK(out.phase_step == -20 * kMicrosecond);
}

TEST_CASE("delay filter")
{
    DelayFilter f;
    CHECK_FALSE(f.value());
    for (Duration d : {1000, 1010, 1900, 1005, 4000, 1020})
        (void)f.add(d);
    // 4000 > 3 x median is rejected; the lucky band is [1000, 1500].
    CHECK(f.rejected() == 1);
    CHECK(f.accepted() == 5);
    CHECK(*f.value() == 1005);
    CHECK_FALSE(f.add(100));

    DelayFilter small(DelayFilterConfig{3, 500, 3.0, 4});
    for (Duration d : {2000, 1000, 1100, 1200})
        (void)small.add(d);
    CHECK(small.size() == 3);
    CHECK(*small.value() == 1100);
}

TEST_CASE("per-interval max offset")
{
    const auto one = max_offset_series({{SimTime{10}, 1, 0, -300, 0, false}}, kSecond);
    REQUIRE(one.size() == 1);
    CHECK(one[0].max_abs_offset == 300);
    const std::vector<OffsetRecord> recs{{SimTime{100}, 1, 0, -800, 0, false},
                                         {SimTime{200}, 2, 0, 200, 0, false},
                                         {SimTime::from_seconds(2), 1, 0, 5, 0, false}};
    const auto s = max_offset_series(recs, kSecond);
    REQUIRE(s.size() == 2);
    CHECK(s[0].index == 0);
    CHECK(s[0].max_abs_offset == 800);
    CHECK(s[1].index == 2);
    CHECK(s[1].max_abs_offset == 5);

    const std::vector<OffsetRecord> unsorted{{SimTime{200}, 1, 0, 0, 0, false}, {SimTime{100}, 1, 0, 0, 0, false}};
    CHECK_THROWS_AS((void)max_offset_series(unsorted, kSecond), std::invalid_argument);
}

namespace {

struct Bench {
    Engine engine;
    netsim::Network net;
    std::deque<clocks::DisciplinedClock> clocks;

    Bench(std::vector<std::string> names, std::uint64_t rate, std::uint64_t seed = 1)
        : engine(seed), net(engine, netsim::Topology::daisy_chain(names, rate, 50)), clocks(names.size())
    {
    }

    PtpDomain::ClockLookup lookup()
    {
        return [this](netsim::NodeId n) -> clocks::DisciplinedClock& { return clocks[n]; };
    }
};

} // namespace

TEST_CASE("ideal clocks give zero offset estimates")
{
    Bench b({"master", "slave"}, 1'000'000'000);
    PtpConfig cfg;
    cfg.stamp_noise = Distribution::constant(0);
    PtpDomain d(b.net, b.lookup(), 0, {1}, cfg);
    d.start(SimTime{});
    b.engine.run_until(SimTime::from_seconds(20));
    REQUIRE(d.records().size() > 100);
    for (const auto& r : d.records()) {
        REQUIRE(r.estimated_offset == 0);
        REQUIRE(r.true_offset == 0);
    }
    CHECK(d.role(0) == PortRole::Master);
    CHECK(d.role(1) == PortRole::Slave);
    CHECK(d.all_locked_once());
}

TEST_CASE("path delay behind a bridge equals the per-hop sum")
{
    Bench b({"master", "bridge", "slave"}, 1'000'000'000);
    PtpConfig cfg;
    cfg.stamp_noise = Distribution::constant(0);
    PtpDomain d(b.net, b.lookup(), 0, {2}, cfg);
    d.start(SimTime{});
    b.engine.run_until(SimTime::from_seconds(20));
    // Two hops of a 90 B frame: 2 x ((90 + 20) x 8 ns + 50 ns).
    const Duration expected = 2 * (netsim::wire_time(90, 1'000'000'000) + 50);
    CHECK(expected == 1860);
    REQUIRE_FALSE(d.records().empty());
    for (const auto& r : d.records())
        REQUIRE(r.path_delay == expected);
    CHECK(*d.status().front().path_delay == expected);
}

TEST_CASE("drifting slave converges below 1 us")
{
    Bench b({"master", "m1", "m2"}, 1'000'000'000, 5);
    b.clocks[1] = clocks::DisciplinedClock(clocks::OscillatorModel{1500 * kMicrosecond, 9.0, 0, 0});
    b.clocks[2] = clocks::DisciplinedClock(clocks::OscillatorModel{-700 * kMicrosecond, -6.5, 0.002, 0}, 0,
                                           RngStream(5, "wander"));
    PtpDomain d(b.net, b.lookup(), 0, {1, 2});
    d.start(SimTime{});
    b.engine.run_until(SimTime::from_seconds(120));
    REQUIRE(d.all_locked_at());
    CHECK(*d.all_locked_at() < SimTime::from_seconds(30));
    CHECK(d.total_lock_losses() == 0);
    for (const auto& m : max_offset_series(d.records(), kSecond)) {
        if (m.index > static_cast<std::int64_t>(d.all_locked_at()->ns() / kSecond))
            REQUIRE(m.max_abs_offset < kMicrosecond);
    }
}

namespace {

double offset_stddev_under_load(std::uint8_t ptp_pcp)
{
    Bench b({"master", "sw", "slave"}, 100'000'000, 9);
    b.clocks[2] = clocks::DisciplinedClock(clocks::OscillatorModel{0, 5.0, 0, 0});
    netsim::TrafficGenerator g{"bg", 1, 2, 0.9, 1500, netsim::TrafficPattern::Poisson, 0};
    netsim::TrafficSource bg(b.net, g, b.engine.stream("bg"));
    bg.start(SimTime{});
    PtpConfig cfg;
    cfg.pcp = ptp_pcp;
    PtpDomain d(b.net, b.lookup(), 0, {2}, cfg);
    d.start(SimTime{});
    b.engine.run_until(SimTime::from_seconds(60));
    double sum = 0;
    double sq = 0;
    std::size_t n = 0;
    for (const auto& r : d.records()) {
        if (r.at < SimTime::from_seconds(20))
            continue;
        const auto v = static_cast<double>(r.true_offset);
        sum += v;
        sq += v * v;
        ++n;
    }
    REQUIRE(n > 10);
    const double mean = sum / static_cast<double>(n);
    return std::sqrt(sq / static_cast<double>(n) - mean * mean);
}

} // namespace

TEST_CASE("offset quality degrades when sync shares the background class")
{
    const double prioritized = offset_stddev_under_load(7);
    const double best_effort = offset_stddev_under_load(0);
    INFO("stddev pcp7 " << prioritized << " ns, pcp0 " << best_effort << " ns");
    CHECK(best_effort > 2 * prioritized);
}

TEST_CASE("domain configuration errors")
{
    Bench b({"master", "slave"}, 1'000'000'000);
    CHECK_THROWS_AS(PtpDomain(b.net, b.lookup(), 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(PtpDomain(b.net, b.lookup(), 0, {0}), std::invalid_argument);
    CHECK_THROWS_AS(PtpDomain(b.net, b.lookup(), 0, {1, 1}), std::invalid_argument);
    PtpConfig bad;
    bad.sync_interval = 0;
    CHECK_THROWS_AS(PtpDomain(b.net, b.lookup(), 0, {1}, bad), std::invalid_argument);
}
