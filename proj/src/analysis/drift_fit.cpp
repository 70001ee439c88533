#include "chainsync/analysis/drift_fit.hpp"

#include <stdexcept>

namespace chainsync::analysis {

DriftFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("fit_line: size mismatch");
    const std::size_t n = x.size();
    if (n < 2)
        throw std::invalid_argument("drift fit needs at least two samples");
    long double mx = 0;
    long double my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<long double>(n);
    my /= static_cast<long double>(n);
    long double sxx = 0;
    long double sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (sxx == 0)
        throw std::invalid_argument("drift fit needs at least two distinct indices");
    const long double slope = sxy / sxx;
    return DriftFit{static_cast<double>(slope), static_cast<double>(my - slope * mx), n, false};
}

DriftFit drift_fit(const PeriodOffsetSeries& series)
{
    const auto u = unwrap(series);
    auto fit = fit_line(u.index, u.value);
    fit.ambiguous = u.ambiguous;
    return fit;
}

} // namespace chainsync::analysis
