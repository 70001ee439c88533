// Command-line front end: run presets or scenario files, compare bundles.

#include "chainsync/engine/errors.hpp"
#include "chainsync/scenario/bundle.hpp"
#include "chainsync/scenario/presets.hpp"
#include "chainsync/scenario/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cs = chainsync::scenario;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw cs::ScenarioError("cannot read scenario file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A path that exists is a scenario file; anything else must be a preset id.
cs::Scenario load(const std::string& what, const std::vector<std::string>& overrides)
{
    std::vector<std::string> log;
    auto s = fs::exists(what) ? cs::load_scenario(read_file(what), overrides, &log)
                              : cs::load_preset(what, overrides, &log);
    for (const auto& line : log)
        std::cerr << line << '\n';
    return s;
}

void print_summary(const cs::RunResult& r, const fs::path& out)
{
    const auto& rep = r.report;
    std::cout << "scenario " << rep.scenario << " seed " << cs::format_hex(rep.seed) << " events " << rep.events
              << '\n';
    if (rep.ptp.enabled) {
        std::cout << "ptp: "
                  << (rep.ptp.all_locked_at ? "locked at " + cs::format_duration(static_cast<chainsync::Duration>(
                                                                 rep.ptp.all_locked_at->ns()))
                                            : std::string("never locked"))
                  << ", lock losses " << rep.ptp.lock_losses << ", max offset after lock " << rep.ptp.max_after_lock
                  << " ns\n";
    }
    for (const auto& t : rep.topics) {
        std::cout << "topic " << t.name << ": delivered " << t.delivered << " dropped " << t.dropped;
        if (t.latency)
            std::cout << " latency p50 " << t.latency->p50 << " ns p99 " << t.latency->p99 << " ns";
        std::cout << '\n';
    }
    for (const auto& v : rep.violations)
        std::cout << "INVARIANT VIOLATION: " << v << '\n';
    std::cout << "bundle written to " << out.string() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chainsync: daisy-chain robot network time-sync simulator"};
    app.require_subcommand(1);

    std::string target;
    std::string out = "out";
    std::string seed;
    std::string duration;
    std::vector<std::string> sets;
    auto* run = app.add_subcommand("run", "run a preset or scenario file and write a bundle");
    run->add_option("scenario", target, "preset id or scenario file")->required();
    run->add_option("--seed", seed, "random seed (decimal or 0x hex)");
    run->add_option("--duration", duration, "simulated duration, seconds unless a unit is given");
    run->add_option("--out", out, "output directory")->capture_default_str();
    run->add_option("--set", sets, "override, section.key=value (repeatable)");

    std::string dir_a;
    std::string dir_b;
    auto* compare = app.add_subcommand("compare", "side-by-side statistics of two bundles");
    compare->add_option("a", dir_a, "first bundle")->required();
    compare->add_option("b", dir_b, "second bundle")->required();

    auto* list = app.add_subcommand("list-presets", "list built-in presets");

    std::string file;
    std::vector<std::string> validate_sets;
    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("file", file, "scenario file")->required();
    validate->add_option("--set", validate_sets, "override, section.key=value (repeatable)");

    std::string show_target;
    std::vector<std::string> show_sets;
    auto* show = app.add_subcommand("show", "print the fully expanded scenario");
    show->add_option("scenario", show_target, "preset id or scenario file")->required();
    show->add_option("--set", show_sets, "override, section.key=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto overrides = sets;
            if (!seed.empty())
                overrides.push_back("scenario.seed=" + seed);
            if (!duration.empty())
                overrides.push_back("scenario.duration=" + duration);
            const auto s = load(target, overrides);
            const auto result = cs::run_scenario(s);
            cs::write_bundle(out, s, result);
            print_summary(result, out);
            return result.exit_code;
        }
        if (*compare) {
            const auto r = cs::compare_bundles(dir_a, dir_b);
            std::cout << r.text;
            return cs::kExitOk;
        }
        if (*list) {
            for (const auto& p : cs::presets())
                std::cout << p.id << "  " << p.description << '\n';
            return cs::kExitOk;
        }
        if (*validate) {
            const auto s = cs::load_scenario(read_file(file), validate_sets);
            std::cout << file << ": ok (" << s.name << ", " << s.publishers.size() << " publishers)\n";
            return cs::kExitOk;
        }
        if (*show) {
            std::cout << cs::canonical_ini(load(show_target, show_sets));
            return cs::kExitOk;
        }
    } catch (const cs::ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cs::kExitValidation;
    } catch (const cs::BundleMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cs::kExitValidation;
    } catch (const chainsync::InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return cs::kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cs::kExitValidation;
    }
    return cs::kExitOk;
}
