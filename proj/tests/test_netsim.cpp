#include "chainsync/engine/errors.hpp"
#include "chainsync/netsim/network.hpp"
#include "chainsync/netsim/traffic.hpp"

#include "properties.hpp"

#include <doctest.h>

#include <memory>
#include <sstream>

using namespace chainsync;
using namespace chainsync::netsim;

namespace {

std::shared_ptr<Frame> make(std::uint8_t pcp, std::uint32_t size, std::uint64_t id = 0)
{
    auto f = std::make_shared<Frame>();
    f->pcp = pcp;
    f->size = size;
    f->id = id;
    return f;
}

} // namespace

TEST_CASE("frame sizes and wire time")
{
    CHECK(frame_size_for_payload(1500) == 1538);
    CHECK(frame_size_for_payload(0) == 64);
    CHECK_THROWS_AS((void)frame_size_for_payload(1501), std::invalid_argument);
    CHECK(wire_time(1538, 100'000'000) == 124'640);
    CHECK(wire_time(1538, 1'000'000'000) == 12'464);
    CHECK(wire_time(64, 1'000'000'000) == 672);
}

TEST_CASE("one idle 100 Mbps hop delivers in serialization + propagation")
{
    Engine e;
    Network net(e, Topology::daisy_chain({"a", "b"}, 100'000'000, 500));
    std::optional<SimTime> got;
    Frame f;
    f.src = 0;
    f.dst = 1;
    f.size = frame_size_for_payload(1500);
    f.on_delivered = [&](const Frame&, SimTime at) { got = at; };
    net.send(std::move(f));
    e.run_until(SimTime::from_seconds(1));
    REQUIRE(got);
    CHECK(got->ns() == 124'640 + 500);
}

TEST_CASE("self-addressed frames loop back immediately")
{
    Engine e;
    Network net(e, Topology::daisy_chain({"a", "b"}, 100'000'000, 500));
    e.run_until(SimTime{1000});
    std::optional<SimTime> got;
    Frame f;
    f.src = 1;
    f.dst = 1;
    f.on_delivered = [&](const Frame&, SimTime at) { got = at; };
    net.send(std::move(f));
    e.run_until(SimTime{2000});
    REQUIRE(got);
    CHECK(got->ns() == 1000);
    CHECK(net.port(1, 0).empty());
}

TEST_CASE("three idle 1 Gbps hops, store-and-forward")
{
    Engine e;
    Network net(e, Topology::daisy_chain({"a", "b", "c", "d"}, 1'000'000'000, 50));
    std::optional<SimTime> got;
    Frame f;
    f.src = 0;
    f.dst = 3;
    f.size = 1538;
    f.on_delivered = [&](const Frame&, SimTime at) { got = at; };
    net.send(std::move(f));
    e.run_until(SimTime::from_seconds(1));
    REQUIRE(got);
    // 3 x (12464 + 50)
    CHECK(got->ns() == 37'542);
}

TEST_CASE("strict priority selection")
{
    EgressPort p(0, 1, Link{0, 1, 100'000'000, 0}, 4);
    p.enqueue(make(0, 1538, 1));
    p.enqueue(make(7, 90, 2));
    REQUIRE(p.select_next(SimTime{}) != nullptr);
    CHECK(p.select_next(SimTime{})->id == 2);

    SUBCASE("tail drop at capacity")
    {
        for (int i = 0; i < 3; ++i)
            CHECK(p.enqueue(make(0, 64)));
        CHECK_FALSE(p.enqueue(make(0, 64)));
        CHECK(p.depth(0) == 4);
    }
}

TEST_CASE("closed gate holds the only queued frame")
{
    EgressPort p(0, 1, Link{0, 1, 100'000'000, 0}, 8);
    p.set_gate_control(GateControlList(kMillisecond, {{0, 500 * kMicrosecond, 0x80}, {500 * kMicrosecond, 500 * kMicrosecond, 0x7F}}));
    p.enqueue(make(0, 64));
    CHECK(p.select_next(SimTime{100}) == nullptr);
    CHECK(p.select_next(SimTime{600 * kMicrosecond}) != nullptr);
}

TEST_CASE("frame that would overrun the window is held to the next cycle")
{
    EgressPort p(0, 1, Link{0, 1, 100'000'000, 0}, 8);
    p.set_gate_control(GateControlList(kMillisecond, {{0, 200 * kMicrosecond, 0x01}}));
    p.enqueue(make(0, 1538));
    // 124.64 us needed, 50 us of window left.
    const SimTime now{150 * kMicrosecond};
    CHECK(p.select_next(now) == nullptr);
    REQUIRE(p.time_until_eligible(now));
    CHECK(*p.time_until_eligible(now) == 850 * kMicrosecond);
    CHECK(p.select_next(SimTime{kMillisecond}) != nullptr);
}

TEST_CASE("gate windows merge across entries and the cycle boundary")
{
    const GateControlList g(10 * kMillisecond, {{0, 100 * kMicrosecond, 0xA0}, {100 * kMicrosecond, 9900 * kMicrosecond, 0xDF}});
    CHECK(g.open_remaining(7, 0) == GateControlList::kForever);
    CHECK(g.open_remaining(5, 0) == 100 * kMicrosecond);
    CHECK(g.open_remaining(5, 100 * kMicrosecond) == 0);
    CHECK(g.open_remaining(0, 100 * kMicrosecond) == 9900 * kMicrosecond);
    CHECK(g.open_remaining(0, 50 * kMicrosecond) == 0);
    CHECK(g.position(-1) == 10 * kMillisecond - 1);

    const GateControlList wrap(1000, {{0, 100, 0x01}, {900, 100, 0x01}});
    CHECK(wrap.open_remaining(0, 950) == 150);
    CHECK(*wrap.time_until_fits(0, 500, 200) == 400);
    CHECK_FALSE(wrap.time_until_fits(0, 500, 300));

    CHECK_THROWS_AS(GateControlList(kMillisecond, {{0, 600, 0x01}, {500, 100, 0x02}}), std::invalid_argument);
    CHECK_THROWS_AS(GateControlList(0, {{0, 1, 0x01}}), std::invalid_argument);
}

TEST_CASE("gated network never starts a frame that misses its window")
{
    Engine e(11);
    Network net(e, Topology::daisy_chain({"a", "b"}, 100'000'000, 50));
    net.set_gate_control(0, 1, GateControlList(kMillisecond, {{0, 300 * kMicrosecond, 0x80}, {300 * kMicrosecond, 700 * kMicrosecond, 0x7F}}));
    const auto gcl = *net.port(0, 1).gate_control();
    int checked = 0;
    net.set_transmit_observer([&](const EgressPort& p, const Frame& f, SimTime start) {
        const auto local = static_cast<LocalTime>(start.ns());
        REQUIRE(gcl.open_remaining(f.pcp, local) >= p.wire_time_of(f));
        ++checked;
    });
    RngStream rng(11, "gated");
    for (int i = 0; i < 2000; ++i) {
        e.schedule(SimTime{rng.next_u64() % (200 * kMillisecond)}, 0, EventKind::Traffic, [&net, &rng] {
            Frame f;
            f.src = 0;
            f.dst = 1;
            f.pcp = rng.uniform01() < 0.3 ? 7 : 0;
            f.size = 64 + static_cast<std::uint32_t>(rng.next_u64() % 1475);
            net.send(std::move(f));
        });
    }
    e.run_until(SimTime::from_seconds(2));
    CHECK(checked == 2000);
    CHECK(net.gated_transmissions() == 2000);
    CHECK(net.counters()[0].delivered + net.counters()[7].delivered == 2000);
}

TEST_CASE("strict-priority interference bound over 1e5 random frames")
{
    const auto r = testing::interference_bound(0xC0B07, 100000);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("traffic generator")
{
    TrafficGenerator g;
    g.load = 0.9;
    g.frame_size = 1500;
    CHECK(mean_gap_ns(g, 100'000'000) == doctest::Approx(124'640.0 / 0.9));
    CHECK(mean_gap_ns(g, 100'000'000) == doctest::Approx(138'490).epsilon(1e-4));

    SUBCASE("load 0 sends nothing")
    {
        Engine e;
        Network net(e, Topology::daisy_chain({"a", "b"}, 100'000'000, 50));
        g.src = 0;
        g.dst = 1;
        g.load = 0;
        TrafficSource src(net, g, e.stream("t"));
        src.start(SimTime{});
        e.run_until(SimTime::from_seconds(10));
        CHECK(src.frames_sent() == 0);
        CHECK(net.counters()[0].sent == 0);
    }

    SUBCASE("periodic departures are exact")
    {
        Engine e;
        Network net(e, Topology::daisy_chain({"a", "b"}, 100'000'000, 50));
        g.src = 0;
        g.dst = 1;
        TrafficSource src(net, g, e.stream("t"));
        src.start(SimTime{});
        e.run_until(SimTime{10 * kSecond - 1});
        // ceil(10 s / 138.49 us)
        CHECK(src.frames_sent() == 72208);
        CHECK(net.drops().empty());
    }

    SUBCASE("poisson load 0.9 over ten minutes")
    {
        Engine e(0xC0B07);
        Network net(e, Topology::daisy_chain({"a", "b"}, 100'000'000, 50));
        g.src = 0;
        g.dst = 1;
        g.pattern = TrafficPattern::Poisson;
        TrafficSource src(net, g, e.stream("traffic.bg"));
        src.start(SimTime{});
        e.run_until(SimTime::from_seconds(600));
        const auto& c = net.counters()[0];
        const double busy_bits = static_cast<double>(c.bytes_delivered + 20 * c.delivered) * 8;
        const double utilization = busy_bits / (100e6 * 600);
        CHECK(utilization == doctest::Approx(0.9).epsilon(0.01 / 0.9));
        net.check_conservation();
    }
}

TEST_CASE("frame conservation with drops")
{
    Engine e;
    Network net(e, Topology::daisy_chain({"a", "b", "c"}, 100'000'000, 50), NetworkConfig{4, true});
    int dropped = 0;
    for (int i = 0; i < 20; ++i) {
        Frame f;
        f.src = 0;
        f.dst = 2;
        f.size = 1538;
        f.on_dropped = [&](const Frame&, NodeId hop) {
            CHECK(hop == 0);
            ++dropped;
        };
        net.send(std::move(f));
    }
    // One on the wire, four queued.
    CHECK(dropped == 15);
    CHECK(net.frames_in_network(0) == 5);
    net.check_conservation();
    e.run_until(SimTime::from_seconds(1));
    CHECK(net.counters()[0].delivered == 5);
    CHECK(net.frames_in_network(0) == 0);
    net.check_conservation();

    std::ostringstream trace;
    net.write_frame_trace(trace);
    CHECK(trace.str().rfind("frame_id,kind,pcp,hop,node,next,enqueue_ns,dequeue_ns,arrive_ns\n", 0) == 0);
}

TEST_CASE("invalid frames are rejected")
{
    Engine e;
    Network net(e, Topology::daisy_chain({"a", "b"}, 100'000'000, 50));
    Frame f;
    f.src = 0;
    f.dst = 1;
    f.size = 63;
    CHECK_THROWS_AS(net.send(f), std::invalid_argument);
    f.size = 64;
    f.pcp = 8;
    CHECK_THROWS_AS(net.send(f), std::invalid_argument);
    f.pcp = 0;
    f.dst = 9;
    CHECK_THROWS_AS(net.send(f), std::invalid_argument);
}

TEST_CASE("topology routing")
{
    auto t = Topology::daisy_chain({"controller", "m1", "m2", "rf"}, 1'000'000'000, 50);
    CHECK(t.route(0, 3) == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(t.route(3, 1) == std::vector<NodeId>{3, 2, 1});
    CHECK(t.require("m2") == 2);
    CHECK_FALSE(t.find("nope"));
    CHECK_THROWS((void)t.require("nope"));
}
