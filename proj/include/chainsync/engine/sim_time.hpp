#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace chainsync {

/// Signed nanosecond quantity: durations, clock offsets and local clock readings.
using Duration = std::int64_t;

/// A node's clock reading in POSIX nanoseconds.
using LocalTime = std::int64_t;

inline constexpr Duration kNanosecond = 1;
inline constexpr Duration kMicrosecond = 1'000;
inline constexpr Duration kMillisecond = 1'000'000;
inline constexpr Duration kSecond = 1'000'000'000;

/// True simulation time in nanoseconds since the simulation epoch.
///
/// Kept distinct from LocalTime so that true time and clock readings cannot be
/// mixed without an explicit conversion. The horizon is bounded by 2^63 ns so
/// that differences always fit a Duration.
class SimTime {
public:
    static constexpr std::uint64_t kHorizon = std::uint64_t{1} << 63;

    constexpr SimTime() = default;
    constexpr explicit SimTime(std::uint64_t ns) : ns_(ns) {}

    static constexpr SimTime from_seconds(std::uint64_t s) { return SimTime{s * 1'000'000'000ULL}; }

    [[nodiscard]] constexpr std::uint64_t ns() const noexcept { return ns_; }
    [[nodiscard]] constexpr double seconds() const noexcept { return static_cast<double>(ns_) * 1e-9; }

    constexpr auto operator<=>(const SimTime&) const = default;

    /// Adds a non-negative duration; overflowing the horizon throws.
    [[nodiscard]] SimTime operator+(Duration d) const
    {
        if (d < 0) {
            if (static_cast<std::uint64_t>(-d) > ns_)
                throw std::out_of_range("SimTime underflow");
            return SimTime{ns_ - static_cast<std::uint64_t>(-d)};
        }
        const auto sum = ns_ + static_cast<std::uint64_t>(d);
        if (sum < ns_ || sum >= kHorizon)
            throw std::out_of_range("SimTime beyond simulation horizon");
        return SimTime{sum};
    }

    [[nodiscard]] SimTime operator-(Duration d) const { return *this + (-d); }

    [[nodiscard]] constexpr Duration operator-(SimTime other) const
    {
        return static_cast<Duration>(ns_) - static_cast<Duration>(other.ns_);
    }

private:
    std::uint64_t ns_ = 0;
};

/// Floored modulo: result lies in [0, m) for any sign of v. m must be positive.
[[nodiscard]] constexpr std::int64_t floor_mod(std::int64_t v, std::int64_t m)
{
    const auto r = v % m;
    return r < 0 ? r + m : r;
}

/// Floored division, the companion of floor_mod.
[[nodiscard]] constexpr std::int64_t floor_div(std::int64_t v, std::int64_t m)
{
    const auto q = v / m;
    return (v % m != 0 && ((v < 0) != (m < 0))) ? q - 1 : q;
}

} // namespace chainsync
