#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace chainsync {

/// 64-bit FNV-1a, used to turn stream labels into keys.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view text) noexcept;

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based random stream.
///
/// The i-th output is a pure function of (scenario seed, label, i), so each
/// (node, purpose) stream is unaffected by how many values other streams draw.
class RngStream {
public:
    RngStream() : RngStream(0, "default") {}
    RngStream(std::uint64_t seed, std::string_view label);

    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }

    /// Output at an arbitrary counter position; does not advance the stream.
    [[nodiscard]] std::uint64_t at(std::uint64_t index) const noexcept;

    std::uint64_t next_u64() noexcept { return at(counter_++); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept;

    /// Standard normal via Box-Muller (consumes two outputs per call).
    double standard_normal() noexcept;

    /// Exponential with the given mean.
    double exponential(double mean) noexcept;

private:
    std::string label_;
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace chainsync
