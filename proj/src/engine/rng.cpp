#include "chainsync/engine/rng.hpp"

#include <cmath>
#include <numbers>

namespace chainsync {

std::uint64_t fnv1a64(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : label_(label), key_(mix64(seed ^ mix64(fnv1a64(label))))
{
}

std::uint64_t RngStream::at(std::uint64_t index) const noexcept
{
    return mix64(key_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

double RngStream::uniform01() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::standard_normal() noexcept
{
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::exponential(double mean) noexcept
{
    return -std::log(1.0 - uniform01()) * mean;
}

} // namespace chainsync
