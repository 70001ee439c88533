#pragma once

#include "chainsync/analysis/period_offset.hpp"

namespace chainsync::analysis {

struct DriftFit {
    /// ns of offset change per period.
    double slope = 0;
    double intercept = 0;
    std::size_t samples = 0;
    bool ambiguous = false;

    /// slope / period: relative rate error (dimensionless).
    [[nodiscard]] double relative_rate(Duration period) const { return slope / static_cast<double>(period); }
};

/// Least-squares line through the unwrapped series. Throws with fewer than
/// two samples.
[[nodiscard]] DriftFit drift_fit(const PeriodOffsetSeries& series);

/// Least-squares slope and intercept of y over x.
[[nodiscard]] DriftFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace chainsync::analysis
