#include "chainsync/ptp/delay_filter.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace chainsync::ptp {

namespace {

Duration median_of(std::vector<Duration> v)
{
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

} // namespace

DelayFilter::DelayFilter(DelayFilterConfig config) : config_(config)
{
    if (config_.window == 0)
        throw std::invalid_argument("delay filter window must be positive");
    if (config_.outlier_factor <= 1.0)
        throw std::invalid_argument("delay outlier factor must exceed 1");
}

bool DelayFilter::add(Duration delay)
{
    if (samples_.size() >= config_.outlier_min_samples) {
        const double m = static_cast<double>(*median());
        const double d = static_cast<double>(delay);
        if (m > 0 && (d > config_.outlier_factor * m || d < m / config_.outlier_factor)) {
            ++rejected_;
            return false;
        }
    }
    samples_.push_back(delay);
    if (samples_.size() > config_.window)
        samples_.pop_front();
    ++accepted_;
    return true;
}

std::optional<Duration> DelayFilter::median() const
{
    if (samples_.empty())
        return std::nullopt;
    return median_of({samples_.begin(), samples_.end()});
}

std::optional<Duration> DelayFilter::value() const
{
    if (samples_.empty())
        return std::nullopt;
    const Duration lo = *std::min_element(samples_.begin(), samples_.end());
    std::vector<Duration> near;
    for (Duration d : samples_) {
        if (d <= lo + config_.band)
            near.push_back(d);
    }
    return median_of(std::move(near));
}

} // namespace chainsync::ptp
