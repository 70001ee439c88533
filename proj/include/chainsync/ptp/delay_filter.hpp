#pragma once

#include "chainsync/engine/sim_time.hpp"

#include <cstddef>
#include <deque>
#include <optional>

namespace chainsync::ptp {

struct DelayFilterConfig {
    std::size_t window = 128;
    /// Samples within this distance of the window minimum count as unqueued.
    Duration band = 500;
    /// Reject samples above factor x median or below median / factor.
    double outlier_factor = 3.0;
    /// Outlier rejection starts once this many samples are held.
    std::size_t outlier_min_samples = 4;
};

/// Path-delay estimator. Queueing only ever adds delay, so the estimate is the
/// median of the samples that sit close to the window minimum.
class DelayFilter {
public:
    explicit DelayFilter(DelayFilterConfig config = {});

    /// Returns false if the sample was rejected as an outlier.
    bool add(Duration delay);

    [[nodiscard]] std::optional<Duration> value() const;
    [[nodiscard]] std::optional<Duration> median() const;
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] std::size_t accepted() const noexcept { return accepted_; }
    [[nodiscard]] std::size_t rejected() const noexcept { return rejected_; }

private:
    DelayFilterConfig config_;
    std::deque<Duration> samples_;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
};

} // namespace chainsync::ptp
