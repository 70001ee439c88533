#include "chainsync/scenario/values.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

namespace chainsync::scenario {

namespace {

struct Unit {
    std::string_view suffix;
    Duration ns;
};

// Longest suffixes first so "ms" is not read as "s".
constexpr std::array<Unit, 5> kTimeUnits{{{"min", 60 * kSecond}, {"ms", kMillisecond}, {"us", kMicrosecond},
                                          {"ns", kNanosecond}, {"s", kSecond}}};

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

double to_double(std::string_view text, std::string_view what)
{
    const auto t = trim(text);
    double v = 0;
    const char* b = t.data();
    const char* e = t.data() + t.size();
    if (!t.empty() && *b == '+')
        ++b;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (t.empty() || ec != std::errc{} || p != e || !std::isfinite(v))
        throw ScenarioError("invalid " + std::string(what) + " '" + t + "'");
    return v;
}

std::vector<std::string> split_args(std::string_view inner)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = inner.find(',', start);
        out.push_back(trim(inner.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

double parse_arg(const std::string& a, ValueKind kind)
{
    if (kind == ValueKind::Scalar)
        return parse_double(a);
    // Time arguments may carry fractional nanoseconds only when given bare.
    const auto t = trim(a);
    for (const auto& u : kTimeUnits) {
        if (ends_with(t, u.suffix))
            return to_double(t.substr(0, t.size() - u.suffix.size()), "duration") * static_cast<double>(u.ns);
    }
    return to_double(t, "duration");
}

std::string format_arg(double v, ValueKind kind)
{
    if (kind == ValueKind::Time && v == std::floor(v) && std::abs(v) < 9e18)
        return format_duration(static_cast<Duration>(v));
    if (kind == ValueKind::Time)
        return format_double(v) + "ns";
    return format_double(v);
}

} // namespace

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

Duration parse_duration(std::string_view text, Duration bare_unit)
{
    const auto t = trim(text);
    for (const auto& u : kTimeUnits) {
        if (ends_with(t, u.suffix)) {
            const double v = to_double(t.substr(0, t.size() - u.suffix.size()), "duration") * static_cast<double>(u.ns);
            if (std::abs(v) > 9.2e18)
                throw ScenarioError("duration '" + t + "' out of range");
            return static_cast<Duration>(std::llround(v));
        }
    }
    if (bare_unit == 0)
        throw ScenarioError("duration '" + t + "' needs a unit (ns, us, ms, s, min)");
    return static_cast<Duration>(std::llround(to_double(t, "duration") * static_cast<double>(bare_unit)));
}

std::string format_duration(Duration d)
{
    if (d == 0)
        return "0ns";
    for (const auto& [suffix, ns] : {std::pair<const char*, Duration>{"s", kSecond}, {"ms", kMillisecond},
                                     {"us", kMicrosecond}}) {
        if (d % ns == 0)
            return std::to_string(d / ns) + suffix;
    }
    return std::to_string(d) + "ns";
}

std::uint64_t parse_rate(std::string_view text)
{
    const auto t = trim(text);
    for (const auto& [suffix, mult] : {std::pair<const char*, double>{"Gbps", 1e9}, {"Mbps", 1e6}, {"kbps", 1e3},
                                       {"bps", 1.0}}) {
        if (ends_with(t, suffix)) {
            const double v = to_double(t.substr(0, t.size() - std::string_view(suffix).size()), "rate") * mult;
            if (v < 1 || v != std::floor(v))
                throw ScenarioError("rate '" + t + "' must be a positive whole number of bps");
            return static_cast<std::uint64_t>(v);
        }
    }
    const auto v = parse_uint(t);
    if (v == 0)
        throw ScenarioError("rate must be positive");
    return v;
}

std::string format_rate(std::uint64_t bps)
{
    if (bps % 1'000'000'000 == 0)
        return std::to_string(bps / 1'000'000'000) + "Gbps";
    if (bps % 1'000'000 == 0)
        return std::to_string(bps / 1'000'000) + "Mbps";
    if (bps % 1'000 == 0)
        return std::to_string(bps / 1'000) + "kbps";
    return std::to_string(bps) + "bps";
}

Distribution parse_distribution(std::string_view text, ValueKind kind)
{
    const auto t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos)
        return Distribution::constant(parse_arg(t, kind));
    if (t.back() != ')')
        throw ScenarioError("distribution '" + t + "': missing ')'");
    const auto name = trim(std::string_view(t).substr(0, open));
    const auto args = split_args(std::string_view(t).substr(open + 1, t.size() - open - 2));
    const auto want = [&](std::size_t n) {
        if (args.size() != n)
            throw ScenarioError("distribution '" + t + "': " + name + " takes " + std::to_string(n) + " argument(s)");
    };
    try {
        if (name == "constant") {
            want(1);
            return Distribution::constant(parse_arg(args[0], kind));
        }
        if (name == "uniform") {
            want(2);
            return Distribution::uniform(parse_arg(args[0], kind), parse_arg(args[1], kind));
        }
        if (name == "normal") {
            want(2);
            return Distribution::normal(parse_arg(args[0], kind), parse_arg(args[1], kind));
        }
        if (name == "lognormal") {
            want(3);
            return Distribution::lognormal(parse_arg(args[0], kind), parse_double(args[1]), parse_arg(args[2], kind));
        }
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("distribution '" + t + "': " + e.what());
    }
    throw ScenarioError("unknown distribution '" + name + "' (constant | uniform | normal | lognormal)");
}

std::string format_distribution(const Distribution& d, ValueKind kind)
{
    return std::visit(
        [&](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Distribution::Constant>)
                return "constant(" + format_arg(s.value, kind) + ")";
            else if constexpr (std::is_same_v<T, Distribution::Uniform>)
                return "uniform(" + format_arg(s.lo, kind) + ", " + format_arg(s.hi, kind) + ")";
            else if constexpr (std::is_same_v<T, Distribution::Normal>)
                return "normal(" + format_arg(s.mean, kind) + ", " + format_arg(s.sigma, kind) + ")";
            else
                return "lognormal(" + format_arg(s.median, kind) + ", " + format_double(s.sigma) + ", " +
                       format_arg(s.cap, kind) + ")";
        },
        d.spec());
}

double parse_double(std::string_view text)
{
    return to_double(text, "number");
}

std::string format_double(double v)
{
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::uint64_t parse_uint(std::string_view text)
{
    const auto t = trim(text);
    std::uint64_t v = 0;
    int base = 10;
    std::string_view digits = t;
    if (digits.size() > 2 && (digits.substr(0, 2) == "0x" || digits.substr(0, 2) == "0X")) {
        base = 16;
        digits.remove_prefix(2);
    }
    const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
    if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size())
        throw ScenarioError("invalid unsigned integer '" + t + "'");
    return v;
}

std::int64_t parse_int(std::string_view text)
{
    const auto t = trim(text);
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || p != t.data() + t.size())
        throw ScenarioError("invalid integer '" + t + "'");
    return v;
}

bool parse_bool(std::string_view text)
{
    const auto t = trim(text);
    if (t == "true" || t == "on" || t == "yes" || t == "1")
        return true;
    if (t == "false" || t == "off" || t == "no" || t == "0")
        return false;
    throw ScenarioError("invalid boolean '" + t + "' (true | false)");
}

std::string format_hex(std::uint64_t v)
{
    static constexpr char kDigits[] = "0123456789ABCDEF";
    std::string s;
    do {
        s.insert(s.begin(), kDigits[v & 0xF]);
        v >>= 4;
    } while (v != 0);
    return "0x" + s;
}

std::vector<std::string> parse_list(std::string_view text)
{
    std::vector<std::string> out;
    if (trim(text).empty())
        return out;
    for (auto& item : split_args(text)) {
        if (item.empty())
            throw ScenarioError("empty entry in list '" + trim(text) + "'");
        out.push_back(std::move(item));
    }
    return out;
}

std::string format_list(const std::vector<std::string>& items)
{
    std::string s;
    for (const auto& i : items)
        s += (s.empty() ? "" : ", ") + i;
    return s;
}

} // namespace chainsync::scenario
