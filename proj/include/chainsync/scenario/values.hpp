#pragma once

#include "chainsync/engine/distribution.hpp"
#include "chainsync/engine/sim_time.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chainsync::scenario {

/// Schema or value error; the message names the offending field.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical meaning of distribution arguments.
enum class ValueKind { Time, Scalar };

/// "100ms", "1.5s", "-2ms", "250ns", "10min". A bare number is read in
/// `bare_unit` ns (0 = bare numbers rejected).
[[nodiscard]] Duration parse_duration(std::string_view text, Duration bare_unit = 0);
/// Largest unit that represents the value exactly: "100ms", "124640ns".
[[nodiscard]] std::string format_duration(Duration d);

/// "1Gbps", "100Mbps", "10kbps", "1000bps" or a bare bps integer.
[[nodiscard]] std::uint64_t parse_rate(std::string_view text);
[[nodiscard]] std::string format_rate(std::uint64_t bps);

/// "constant(x)", "uniform(a, b)", "normal(mean, sigma)",
/// "lognormal(median, sigma, cap)", or a bare value meaning constant.
/// For ValueKind::Time the location/scale arguments are durations (lognormal
/// sigma is always dimensionless).
[[nodiscard]] Distribution parse_distribution(std::string_view text, ValueKind kind);
[[nodiscard]] std::string format_distribution(const Distribution& d, ValueKind kind);

[[nodiscard]] double parse_double(std::string_view text);
/// Shortest representation that round-trips.
[[nodiscard]] std::string format_double(double v);
/// Decimal or 0x-prefixed hex.
[[nodiscard]] std::uint64_t parse_uint(std::string_view text);
[[nodiscard]] std::int64_t parse_int(std::string_view text);
[[nodiscard]] bool parse_bool(std::string_view text);
[[nodiscard]] std::string format_hex(std::uint64_t v);

/// Comma-separated list, entries trimmed, empty entries rejected.
[[nodiscard]] std::vector<std::string> parse_list(std::string_view text);
[[nodiscard]] std::string format_list(const std::vector<std::string>& items);

[[nodiscard]] std::string trim(std::string_view s);

} // namespace chainsync::scenario
