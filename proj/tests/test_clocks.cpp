#include "chainsync/clocks/disciplined_clock.hpp"
#include "chainsync/clocks/timestamp.hpp"
#include "chainsync/engine/errors.hpp"

#include "properties.hpp"

#include <doctest.h>

#include <cmath>

using namespace chainsync;
using clocks::DisciplinedClock;
using clocks::OscillatorModel;

TEST_CASE("identity oscillator reads true time")
{
    DisciplinedClock c;
    CHECK(c.local_now(SimTime{123456}) == 123456);
    RngStream rng(1, "identity");
    std::uint64_t t = 123456;
    for (int i = 0; i < 10000; ++i) {
        t += rng.next_u64() % kSecond;
        REQUIRE(c.local_now(SimTime{t}) == static_cast<LocalTime>(t));
    }
}

TEST_CASE("+10 ppm gains 1 ms in 100 s")
{
    DisciplinedClock c(OscillatorModel{0, 10.0, 0, 0});
    CHECK(c.local_now(SimTime::from_seconds(100)) == 100 * kSecond + kMillisecond);
}

TEST_CASE("constant drift stays on the line within 1 ns")
{
    for (double ppm : {-37.5, -1.0, 3.3, 10.0, 99.0}) {
        DisciplinedClock c(OscillatorModel{0, ppm, 0, 0}, 0);
        const LocalTime zero = c.local_now(SimTime{});
        RngStream rng(2, "drift-line");
        std::uint64_t t = 0;
        for (int i = 0; i < 2000; ++i) {
            t += rng.next_u64() % (kSecond / 3);
            const double want = (1 + ppm * 1e-6) * static_cast<double>(t);
            REQUIRE(std::abs(static_cast<double>(c.local_now(SimTime{t}) - zero) - want) <= 1.0);
        }
    }
}

TEST_CASE("wander golden value at 600 s")
{
    // Direct integration of the per-second random walk from the same stream.
    const std::uint64_t seed = 0xC0B07;
    RngStream walk(seed, "clock.wander.golden");
    double wander = 0;
    double gain = 0;
    for (int s = 0; s < 600; ++s) {
        gain += (10 + wander) * 1e-6 * 1e9;
        wander += 0.01 * walk.standard_normal();
    }
    const auto expected = 600 * kSecond + static_cast<Duration>(std::floor(gain));

    DisciplinedClock c(OscillatorModel{0, 10.0, 0.01, 0}, 0, RngStream(seed, "clock.wander.golden"));
    const LocalTime at600 = c.local_now(SimTime::from_seconds(600));
    CHECK(std::llabs(at600 - expected) <= 1);
    // Frozen regression value.
    CHECK(at600 == 600'006'040'651);
}

TEST_CASE("negative step on a never-read clock applies directly")
{
    DisciplinedClock c(OscillatorModel{0, 0, 0, 0}, 1'000'000'000'000);
    c.apply_correction(SimTime{1000}, -500 * kMicrosecond, 0);
    CHECK(c.peek(SimTime{1000}) == 1'000'000'000'000 + 1000 - 500 * kMicrosecond);
    CHECK(c.pending_slew_ns() == 0);
}

TEST_CASE("frequency correction cancels oscillator drift")
{
    DisciplinedClock c(OscillatorModel{0, 10.0, 0, 0});
    c.apply_correction(SimTime::from_seconds(1), 0, -10.0);
    const LocalTime a = c.local_now(SimTime::from_seconds(1));
    const LocalTime b = c.local_now(SimTime::from_seconds(101));
    CHECK(b - a == 100 * kSecond);
}

TEST_CASE("negative step on a read clock slews without going backwards")
{
    DisciplinedClock c(OscillatorModel{0, 0, 0, 0});
    (void)c.local_now(SimTime::from_seconds(1));
    c.apply_correction(SimTime::from_seconds(1), -kMillisecond, 0);
    LocalTime last = c.local_now(SimTime::from_seconds(1));
    for (std::uint64_t t = kSecond; t <= 4 * kSecond; t += 997) {
        const LocalTime v = c.local_now(SimTime{t});
        REQUIRE(v >= last);
        last = v;
    }
    // 1 ms at 500 ppm takes 2 s; afterwards the full step is in.
    CHECK(c.error(SimTime::from_seconds(4)) == -kMillisecond);
}

TEST_CASE("clock monotonicity over random correction sequences")
{
    const auto r = testing::clock_monotonicity(0xC0B07, 10000);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("reading backwards in true time is rejected")
{
    DisciplinedClock c;
    (void)c.local_now(SimTime{1000});
    CHECK_THROWS_AS((void)c.local_now(SimTime{999}), ContractViolation);
}

TEST_CASE("true_time_for reaches the target reading")
{
    DisciplinedClock c(OscillatorModel{0, -40.0, 0, 0});
    auto before = c;
    const SimTime at = c.true_time_for(kSecond, SimTime{});
    CHECK(before.peek(at - 2) < kSecond);
    CHECK(c.peek(at) >= kSecond);
}

TEST_CASE("timestamps")
{
    DisciplinedClock c(OscillatorModel{500, 3.0, 0, 0});
    RngStream rng(9, "stamps");

    const auto exact = clocks::TimestampModel::software(Distribution::constant(0));
    const auto s = clocks::stamp(exact, c, SimTime{77'777}, rng);
    CHECK(s.value == c.local_now(SimTime{77'777}));
    CHECK(s.noise == 0);

    SUBCASE("hardware noise sigma within 10% of 50 ns")
    {
        const auto hw = clocks::TimestampModel::hardware_default();
        double sum = 0;
        double sq = 0;
        constexpr int n = 100000;
        for (int i = 0; i < n; ++i) {
            const auto st = clocks::stamp(hw, c, SimTime{1'000'000}, rng);
            const double d = static_cast<double>(st.value - c.peek(SimTime{1'000'000}));
            sum += d;
            sq += d * d;
        }
        const double mean = sum / n;
        const double sigma = std::sqrt(sq / n - mean * mean);
        CHECK(sigma == doctest::Approx(50.0).epsilon(0.10));
    }

    SUBCASE("software stamps never precede the clock reading")
    {
        const auto sw = clocks::TimestampModel::software(Distribution::lognormal(15'000, 0.45, 60'000));
        std::uint64_t t = 1'000'000;
        for (int i = 0; i < 10000; ++i) {
            t += 1000;
            const auto st = clocks::stamp(sw, c, SimTime{t}, rng);
            REQUIRE(st.value >= c.local_now(SimTime{t}));
        }
    }

    CHECK_THROWS_AS(clocks::TimestampModel::software(Distribution::normal(0, 10)), std::invalid_argument);
}
