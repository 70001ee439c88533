#pragma once

#include "chainsync/analysis/drift_fit.hpp"
#include "chainsync/analysis/stats.hpp"
#include "chainsync/netsim/network.hpp"
#include "chainsync/ptp/offset_stats.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chainsync::analysis {

inline constexpr Duration kOffsetBinWidth = 10 * kMicrosecond;
inline constexpr Duration kLatencyBinWidth = 50 * kMicrosecond;

struct TopicSpec {
    std::string name;
    Duration period = 0;
};

/// Everything a finished run hands to the analysis stage.
struct RunData {
    std::string scenario;
    std::uint64_t seed = 0;
    LocalTime epoch = 0;
    Duration duration = 0;
    std::vector<std::string> chain;
    std::vector<TopicSpec> topics;
    std::vector<pubsub::TraceRecord> trace;

    bool ptp_enabled = false;
    std::vector<ptp::OffsetRecord> ptp_records;
    std::optional<SimTime> all_locked_at;
    int lock_losses = 0;

    std::array<netsim::ClassCounters, netsim::kNumClasses> frames{};
    std::uint64_t events = 0;
    std::uint64_t event_digest = 0;
    std::uint64_t gated_transmissions = 0;
    std::vector<std::string> violations;
};

struct TopicReport {
    std::string name;
    Duration period = 0;
    std::uint64_t published = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    SummaryStats dt_pub;
    SummaryStats dt_sub;
    std::optional<DriftFit> dt_pub_fit;
    std::optional<DriftFit> dt_sub_fit;
    /// Last minus first unwrapped Delta t_SUB sample.
    Duration dt_sub_cumulative_drift = 0;
    Histogram dt_pub_hist;
    Histogram dt_sub_hist;
    std::optional<SummaryStats> latency;
    std::optional<Histogram> latency_hist;
    std::vector<Duration> latencies;
};

struct PtpReport {
    bool enabled = false;
    std::optional<SimTime> all_locked_at;
    int lock_losses = 0;
    /// Per-second max |true offset| over all slaves.
    std::vector<ptp::IntervalMax> per_second;
    Duration max_after_lock = 0;
    std::size_t seconds_over_1us_after_lock = 0;
};

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    LocalTime epoch = 0;
    Duration duration = 0;
    std::vector<std::string> chain;
    bool synchronized = false;
    /// Statistics use messages sent at or after this instant.
    SimTime stats_from{};
    std::vector<TopicReport> topics;
    std::optional<SummaryStats> latency_all;
    double latency_in_1_2ms = 0;
    PtpReport ptp;
    std::array<netsim::ClassCounters, netsim::kNumClasses> frames{};
    std::uint64_t events = 0;
    std::uint64_t event_digest = 0;
    std::uint64_t gated_transmissions = 0;
    std::vector<std::string> violations;
};

/// Clocks count as synchronized when PTP ran and every slave locked. Stats
/// then start at the instant the last slave locked.
[[nodiscard]] Report analyze(const RunData& run);

/// INI-structured summary; byte-identical for identical inputs.
void write_report(std::ostream& out, const Report& r);

void write_dt_csv(std::ostream& out, const RunData& run, StampColumn column);
void write_latency_csv(std::ostream& out, const Report& r);
void write_ptp_offsets_csv(std::ostream& out, const RunData& run);
void write_ptp_max_offset_csv(std::ostream& out, const Report& r);
void write_histograms_csv(std::ostream& out, const Report& r);

/// Fixed-point decimal formatting used in every output file.
[[nodiscard]] std::string fmt(double v, int decimals = 3);

} // namespace chainsync::analysis
