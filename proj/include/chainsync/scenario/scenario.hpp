#pragma once

#include "chainsync/netsim/gate_control.hpp"
#include "chainsync/netsim/traffic.hpp"
#include "chainsync/pubsub/stack_model.hpp"
#include "chainsync/pubsub/timer.hpp"
#include "chainsync/scenario/values.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chainsync::scenario {

inline constexpr LocalTime kDefaultEpoch = 1535967970000000000;
inline constexpr std::uint64_t kDefaultSeed = 0xC0B07;

struct LinkSpec {
    std::optional<std::uint64_t> rate_bps;
    std::optional<Duration> propagation;
    bool operator==(const LinkSpec&) const = default;
};

struct ClockDefaults {
    Distribution drift_ppm = Distribution::uniform(-10, 10);
    Distribution offset = Distribution::uniform(-2.0 * kMillisecond, 2.0 * kMillisecond);
    double wander_ppm = 0.002;
    double jitter_ns = 0;
    bool operator==(const ClockDefaults&) const = default;
};

/// Per-node values that replace the random draws of [clocks].
struct ClockOverride {
    std::optional<double> drift_ppm;
    std::optional<Duration> offset;
    std::optional<double> wander_ppm;
    std::optional<double> jitter_ns;
    bool operator==(const ClockOverride&) const = default;
};

struct PtpSpec {
    bool enabled = false;
    std::string master = "controller";
    std::vector<std::string> slaves;
    Duration sync_interval = 125 * kMillisecond;
    Duration delay_req_interval = 1 * kSecond;
    Distribution stamp_noise = Distribution::normal(0, 50);
    double kp = 0.7;
    double ki = 0.3;
    Duration step_threshold = 10 * kMicrosecond;
    bool operator==(const PtpSpec&) const = default;
};

struct PriorityMap {
    int ptp = 7;
    int topic = 0;
    int background = 0;
    bool operator==(const PriorityMap&) const = default;
};

struct PublisherSpec {
    std::string topic;
    std::string node;
    std::string subscriber = "controller";
    Duration period = 100 * kMillisecond;
    pubsub::TimerMode timer = pubsub::TimerMode::Relative;
    Distribution exec_time = Distribution::constant(1.0 * kMillisecond);
    std::uint32_t size = 256;
    /// Unset: [priority] topic.
    std::optional<int> pcp;
    Duration offset = 0;
    bool operator==(const PublisherSpec&) const = default;
};

struct TrafficSpec {
    std::string name;
    std::string src;
    std::string dst;
    double load = 0.9;
    std::uint32_t size = 1500;
    netsim::TrafficPattern pattern = netsim::TrafficPattern::SaturatingPeriodic;
    /// Unset: [priority] background.
    std::optional<int> pcp;
    bool operator==(const TrafficSpec&) const = default;
};

struct QbvSpec {
    std::string node;
    std::string toward;
    bool enabled = true;
    Duration cycle = 10 * kMillisecond;
    Duration base_time = 0;
    std::vector<netsim::GateEntry> entries;
    bool operator==(const QbvSpec&) const = default;
};

/// Complete declarative description of one experiment.
struct Scenario {
    std::string name = "custom";
    LocalTime epoch = kDefaultEpoch;
    Duration duration = 600 * kSecond;
    std::uint64_t seed = kDefaultSeed;

    std::vector<std::string> chain;
    std::uint64_t rate_bps = 1'000'000'000;
    Duration propagation = 50;
    std::size_t queue_capacity = 256;
    std::map<std::string, LinkSpec> links;

    ClockDefaults clocks;
    std::map<std::string, ClockOverride> clock_overrides;

    PtpSpec ptp;
    pubsub::StackModel stack;
    PriorityMap priority;
    std::vector<PublisherSpec> publishers;
    std::vector<TrafficSpec> traffic;
    std::vector<QbvSpec> qbv;
    bool frame_trace = false;

    bool operator==(const Scenario&) const = default;
};

/// Parses the INI text, applies `overrides` ("section.key=value", split at
/// the last dot; the override wins over the file), validates, and returns the
/// scenario. Every applied override is appended to `log` if given.
[[nodiscard]] Scenario load_scenario(const std::string& ini_text, const std::vector<std::string>& overrides = {},
                                     std::vector<std::string>* log = nullptr);

/// Throws ScenarioError naming the field and the violated constraint.
void validate(const Scenario& s);

/// Fully expanded, deterministic INI dump. load_scenario(canonical_ini(s)) == s.
[[nodiscard]] std::string canonical_ini(const Scenario& s);

/// "start:duration:mask, ..." gate entry list.
[[nodiscard]] std::vector<netsim::GateEntry> parse_gate_entries(std::string_view text);
[[nodiscard]] std::string format_gate_entries(const std::vector<netsim::GateEntry>& entries);

} // namespace chainsync::scenario
