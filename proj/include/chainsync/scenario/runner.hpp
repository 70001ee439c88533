#pragma once

#include "chainsync/analysis/report.hpp"
#include "chainsync/scenario/scenario.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace chainsync::scenario {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitInvariant = 2 };

struct RunResult {
    analysis::RunData data;
    analysis::Report report;
    /// Per-hop frame log (empty unless [output] frame_trace is on).
    std::string frame_trace_csv;
    /// Initial oscillator parameters drawn for each node, in chain order.
    std::vector<std::pair<std::string, clocks::OscillatorModel>> oscillators;
    int exit_code = kExitOk;
};

/// Builds the network, clocks, PTP domain, publishers and traffic for `s`,
/// runs it for s.duration and analyzes the trace. An invariant violation
/// stops the run; it is named in the report and exit_code is kExitInvariant.
[[nodiscard]] RunResult run_scenario(const Scenario& s);

/// Writes trace.csv, scenario.ini, report.txt and the per-series CSVs.
void write_bundle(const std::filesystem::path& dir, const Scenario& s, const RunResult& r);

} // namespace chainsync::scenario
