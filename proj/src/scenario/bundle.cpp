#include "chainsync/scenario/bundle.hpp"

#include "chainsync/analysis/report.hpp"
#include "chainsync/scenario/values.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace chainsync::scenario {

namespace pt = boost::property_tree;

namespace {

pt::ptree read_report(const std::filesystem::path& dir)
{
    const auto path = dir / "report.txt";
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::runtime_error(path.string() + ": " + e.message());
    }
    return tree;
}

std::string get(const pt::ptree& tree, const std::string& section, const std::string& key)
{
    const auto s = tree.get_child_optional(pt::ptree::path_type(section, '/'));
    if (!s)
        return {};
    return s->get<std::string>(pt::ptree::path_type(key, '/'), "");
}

using Bins = std::map<std::int64_t, std::int64_t>;

std::map<std::string, Bins> read_histograms(const std::filesystem::path& dir)
{
    const auto path = dir / "histograms.csv";
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::map<std::string, Bins> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string series;
        std::string topic;
        std::string start;
        std::string width;
        std::string count;
        if (!std::getline(ss, series, ',') || !std::getline(ss, topic, ',') || !std::getline(ss, start, ',') ||
            !std::getline(ss, width, ',') || !std::getline(ss, count, ','))
            throw std::runtime_error(path.string() + ": malformed line '" + line + "'");
        out[series + "." + topic][parse_int(start)] = parse_int(count);
    }
    return out;
}

bool is_number(const std::string& s)
{
    if (s.empty())
        return false;
    std::size_t pos = 0;
    try {
        (void)std::stod(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

} // namespace

CompareResult compare_bundles(const std::filesystem::path& a, const std::filesystem::path& b)
{
    const auto ra = read_report(a);
    const auto rb = read_report(b);

    const auto chain_a = get(ra, "topology", "chain");
    const auto chain_b = get(rb, "topology", "chain");
    if (chain_a != chain_b)
        throw BundleMismatch("different topologies: '" + chain_a + "' vs '" + chain_b + "'");
    const auto topics_a = parse_list(get(ra, "topology", "topics"));
    const auto topics_b = parse_list(get(rb, "topology", "topics"));
    if (topics_a != topics_b) {
        std::string only_a;
        std::string only_b;
        for (const auto& t : topics_a) {
            if (std::find(topics_b.begin(), topics_b.end(), t) == topics_b.end())
                only_a += " " + t;
        }
        for (const auto& t : topics_b) {
            if (std::find(topics_a.begin(), topics_a.end(), t) == topics_a.end())
                only_b += " " + t;
        }
        throw BundleMismatch("topic sets differ; only in A:" + (only_a.empty() ? " -" : only_a) +
                             "; only in B:" + (only_b.empty() ? " -" : only_b));
    }

    CompareResult result;
    std::ostringstream o;
    o << "[compare]\na = " << a.string() << "\nb = " << b.string() << "\nscenario_a = " << get(ra, "run", "scenario")
      << "\nscenario_b = " << get(rb, "run", "scenario") << '\n';

    const auto section_deltas = [&](const std::string& section) {
        const auto sa = ra.get_child_optional(pt::ptree::path_type(section, '/'));
        const auto sb = rb.get_child_optional(pt::ptree::path_type(section, '/'));
        o << "\n[" << section << "]\n";
        if (!sa || !sb) {
            o << "present = " << (sa ? "a" : "b") << " only\n";
            result.identical = false;
            return;
        }
        for (const auto& [key, va] : *sa) {
            const auto vb = sb->get_optional<std::string>(pt::ptree::path_type(key, '/'));
            const auto& x = va.data();
            if (!vb) {
                o << key << " = " << x << " -> (absent)\n";
                result.identical = false;
                continue;
            }
            if (is_number(x) && is_number(*vb)) {
                const double d = std::stod(*vb) - std::stod(x);
                if (d != 0)
                    result.identical = false;
                o << key << " = " << x << " -> " << *vb << " (delta " << analysis::fmt(d) << ")\n";
            } else {
                if (x != *vb)
                    result.identical = false;
                o << key << " = " << x << " -> " << *vb << '\n';
            }
        }
    };

    section_deltas("latency");
    if (get(ra, "ptp", "enabled") == "true" || get(rb, "ptp", "enabled") == "true")
        section_deltas("ptp");
    for (const auto& t : topics_a)
        section_deltas("topic." + t);

    const auto ha = read_histograms(a);
    const auto hb = read_histograms(b);
    std::map<std::string, std::pair<Bins, Bins>> all;
    for (const auto& [k, v] : ha)
        all[k].first = v;
    for (const auto& [k, v] : hb)
        all[k].second = v;
    for (const auto& [key, pair] : all) {
        const auto& [x, y] = pair;
        std::int64_t abs_delta = 0;
        std::int64_t changed = 0;
        std::map<std::int64_t, std::int64_t> keys;
        for (const auto& [bin, c] : x)
            keys[bin] -= c;
        for (const auto& [bin, c] : y)
            keys[bin] += c;
        for (const auto& [bin, d] : keys) {
            if (d != 0) {
                ++changed;
                abs_delta += std::llabs(d);
            }
        }
        if (changed)
            result.identical = false;
        o << "\n[histogram." << key << "]\nchanged_bins = " << changed << "\nabs_count_delta = " << abs_delta << '\n';
        for (const auto& [bin, d] : keys) {
            if (d != 0)
                o << "bin." << bin << " = " << (d > 0 ? "+" : "") << d << '\n';
        }
    }
    o << "\n[summary]\nidentical = " << (result.identical ? "true" : "false") << '\n';
    result.text = o.str();
    return result;
}

} // namespace chainsync::scenario
