#include "chainsync/analysis/drift_fit.hpp"
#include "chainsync/analysis/period_offset.hpp"
#include "chainsync/analysis/report.hpp"
#include "chainsync/analysis/stats.hpp"
#include "chainsync/engine/rng.hpp"

#include "properties.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

using namespace chainsync;
using namespace chainsync::analysis;

TEST_CASE("period offset examples")
{
    CHECK(period_offset(1535967970850000000, 100 * kMillisecond) == 50 * kMillisecond);
    CHECK(period_offset(1535967970800000000, 100 * kMillisecond) == 0);
    CHECK(period_offset(1535967970900000000, 100 * kMillisecond) == 0);
    CHECK(period_offset(-30 * kMillisecond, 100 * kMillisecond) == 70 * kMillisecond);
    CHECK_THROWS_AS((void)period_offset(5, 0), std::invalid_argument);
}

TEST_CASE("period offset periodicity and floored modulo")
{
    const auto r = testing::period_offset_periodicity(0xC0B07, 100000);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("histogram")
{
    const auto h = histogram({0, 5, 10}, 10);
    CHECK(h.total == 3);
    CHECK(h.bins == std::map<std::int64_t, std::uint64_t>{{0, 2}, {1, 1}});
    CHECK(h.support_width() == 20);

    const auto empty = histogram({}, 10);
    CHECK(empty.total == 0);
    CHECK(empty.bins.empty());
    CHECK(empty.support_width() == 0);

    CHECK(histogram({-1}, 10).bins.begin()->first == -1);
    CHECK_THROWS_AS((void)histogram({1}, 0), std::invalid_argument);
}

TEST_CASE("histogram counts match a brute-force recount")
{
    RngStream rng(4, "hist");
    std::vector<Duration> values;
    for (int i = 0; i < 20000; ++i)
        values.push_back(static_cast<Duration>(rng.next_u64() % 2'000'000) - 1'000'000);
    const auto h = histogram(values, 10 * kMicrosecond);
    CHECK(h.total == values.size());
    std::uint64_t sum = 0;
    for (const auto& [bin, count] : h.bins) {
        std::uint64_t brute = 0;
        for (Duration v : values) {
            if (v >= bin * 10 * kMicrosecond && v < (bin + 1) * 10 * kMicrosecond)
                ++brute;
        }
        REQUIRE(brute == count);
        sum += count;
    }
    CHECK(sum == values.size());
}

TEST_CASE("summary statistics")
{
    std::vector<Duration> v;
    for (Duration i = 100; i >= 1; --i)
        v.push_back(i);
    const auto s = summarize(v);
    CHECK(s.count == 100);
    CHECK(s.min == 1);
    CHECK(s.max == 100);
    CHECK(s.mean == doctest::Approx(50.5));
    CHECK(s.stddev == doctest::Approx(29.011491975882016));
    CHECK(s.p50 == 50);
    CHECK(s.p99 == 99);
    CHECK(s.p999 == 100);

    std::vector<Duration> sorted{10, 20, 30};
    CHECK(nearest_rank(sorted, 0.0) == 10);
    CHECK(nearest_rank(sorted, 0.34) == 20);
    CHECK(nearest_rank(sorted, 1.0) == 30);

    const auto none = summarize({});
    CHECK(none.count == 0);
    CHECK(none.p99 == 0);
}

namespace {

PeriodOffsetSeries wrapped(Duration period, Duration start, Duration slope, int n)
{
    PeriodOffsetSeries s{"t", period, {}};
    for (int k = 0; k < n; ++k)
        s.samples.push_back({k, period_offset(start + k * slope, period)});
    return s;
}

} // namespace

TEST_CASE("drift fit recovers known slopes")
{
    const Duration period = 100 * kMillisecond;
    CHECK(drift_fit(wrapped(period, 40 * kMillisecond, 0, 50)).slope == 0);
    for (Duration slope : {Duration{1000}, Duration{-1000}, Duration{-7}, kMillisecond, -3 * kMillisecond}) {
        const auto fit = drift_fit(wrapped(period, 95 * kMillisecond, slope, 600));
        CHECK(std::abs(fit.slope - static_cast<double>(slope)) <= 1e-9 * std::abs(static_cast<double>(slope)));
        CHECK_FALSE(fit.ambiguous);
    }
    CHECK(drift_fit(wrapped(period, 0, kMillisecond, 10)).relative_rate(period) == doctest::Approx(0.01));

    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 1000; ++i) {
        x.push_back(i * 3.0);
        y.push_back(0.123456789 * i * 3.0 - 42.0);
    }
    const auto line = fit_line(x, y);
    CHECK(std::abs(line.slope - 0.123456789) <= 1e-9 * 0.123456789);
    CHECK(line.intercept == doctest::Approx(-42.0));

    CHECK_THROWS((void)drift_fit(wrapped(period, 0, 0, 1)));
}

TEST_CASE("unwrapped steps never exceed half a period")
{
    RngStream rng(8, "unwrap");
    for (int trial = 0; trial < 200; ++trial) {
        const Duration period = 1 + static_cast<Duration>(rng.next_u64() % 1'000'000);
        PeriodOffsetSeries s{"t", period, {}};
        for (int k = 0; k < 200; ++k)
            s.samples.push_back({k, static_cast<Duration>(rng.next_u64() % static_cast<std::uint64_t>(period))});
        const auto u = unwrap(s);
        for (std::size_t i = 1; i < u.value.size(); ++i) {
            REQUIRE(2 * std::abs(u.value[i] - u.value[i - 1]) <= static_cast<double>(period));
            // Unwrapping only ever shifts by whole periods.
            REQUIRE(std::fmod(u.value[i] - static_cast<double>(s.samples[i].offset), static_cast<double>(period)) == 0);
        }
    }
    PeriodOffsetSeries half{"t", 100, {{0, 0}, {1, 50}}};
    CHECK(unwrap(half).ambiguous);
}

TEST_CASE("latency")
{
    pubsub::TraceRecord r;
    r.t_pub = 1000;
    r.t_sub = 2500;
    CHECK(latency(r, true) == 1500);
    CHECK_THROWS_AS((void)latency(r, false), LatencyRefused);
}

TEST_CASE("empty run produces a zero report")
{
    RunData run;
    run.scenario = "empty";
    run.chain = {"controller", "m1"};
    run.topics = {{"motor1", 100 * kMillisecond}};
    const auto r = analyze(run);
    REQUIRE(r.topics.size() == 1);
    CHECK(r.topics[0].published == 0);
    CHECK(r.topics[0].dt_pub.count == 0);
    CHECK_FALSE(r.topics[0].dt_pub_fit);
    CHECK_FALSE(r.synchronized);
    CHECK_FALSE(r.latency_all);

    std::ostringstream a;
    std::ostringstream b;
    write_report(a, r);
    write_report(b, analyze(run));
    CHECK(a.str() == b.str());
    CHECK(a.str().find("[topic.motor1]") != std::string::npos);
    std::ostringstream csv;
    write_histograms_csv(csv, r);
    CHECK(csv.str() == "series,topic,bin_start_ns,bin_width_ns,count\n");
}

TEST_CASE("synchronized report starts at the lock instant")
{
    RunData run;
    run.scenario = "sync";
    run.chain = {"controller", "m1"};
    run.topics = {{"motor1", 100 * kMillisecond}};
    run.ptp_enabled = true;
    run.all_locked_at = SimTime::from_seconds(2);
    for (std::uint64_t k = 0; k < 50; ++k) {
        pubsub::TraceRecord t;
        t.topic = "motor1";
        t.seq = k;
        t.true_send = SimTime{(k + 1) * 100 * kMillisecond};
        t.t_pub = static_cast<LocalTime>(t.true_send.ns()) + kMillisecond;
        t.t_sub = t.t_pub + 1500 * kMicrosecond;
        t.true_recv = t.true_send + 1500 * kMicrosecond;
        run.trace.push_back(t);
    }
    const auto r = analyze(run);
    CHECK(r.synchronized);
    CHECK(r.stats_from == SimTime::from_seconds(2));
    REQUIRE(r.latency_all);
    // Sends at 2.0 s .. 5.0 s.
    CHECK(r.latency_all->count == 31);
    CHECK(r.latency_all->p99 == 1500 * kMicrosecond);
    CHECK(r.latency_in_1_2ms == 1.0);
    CHECK(r.topics[0].dt_pub.min == kMillisecond);
    CHECK(r.topics[0].dt_pub.max == kMillisecond);
}
