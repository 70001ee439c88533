#include "chainsync/engine/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainsync {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be finite");
}

} // namespace

Distribution Distribution::constant(double v)
{
    require_finite(v, "constant value");
    return Distribution{Constant{v}};
}

Distribution Distribution::uniform(double lo, double hi)
{
    require_finite(lo, "uniform lower bound");
    require_finite(hi, "uniform upper bound");
    if (lo > hi)
        throw std::invalid_argument("uniform(a, b) requires a <= b");
    return Distribution{Uniform{lo, hi}};
}

Distribution Distribution::normal(double mean, double sigma)
{
    require_finite(mean, "normal mean");
    require_finite(sigma, "normal sigma");
    if (sigma < 0)
        throw std::invalid_argument("normal sigma must be >= 0");
    return Distribution{Normal{mean, sigma}};
}

Distribution Distribution::lognormal(double median, double sigma, double cap)
{
    require_finite(median, "lognormal median");
    require_finite(sigma, "lognormal sigma");
    require_finite(cap, "lognormal cap");
    if (median <= 0)
        throw std::invalid_argument("lognormal median must be > 0");
    if (sigma < 0)
        throw std::invalid_argument("lognormal sigma must be >= 0");
    if (cap < median)
        throw std::invalid_argument("lognormal cap must be >= median");
    return Distribution{LogNormal{median, sigma, cap}};
}

double Distribution::sample(RngStream& stream) const
{
    return std::visit(
        overloaded{
            [](const Constant& c) { return c.value; },
            [&](const Uniform& u) { return u.lo + (u.hi - u.lo) * stream.uniform01(); },
            [&](const Normal& n) {
                if (n.sigma == 0)
                    return n.mean;
                double z = stream.standard_normal();
                while (std::abs(z) > 4.0)
                    z = stream.standard_normal();
                return n.mean + n.sigma * z;
            },
            [&](const LogNormal& l) {
                const double v = l.median * std::exp(l.sigma * stream.standard_normal());
                return std::min(v, l.cap);
            },
        },
        spec_);
}

double Distribution::lower_bound() const
{
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [](const Uniform& u) { return u.lo; },
                          [](const Normal& n) { return n.mean - 4 * n.sigma; },
                          [](const LogNormal& l) { return l.sigma == 0 ? l.median : 0.0; },
                      },
                      spec_);
}

double Distribution::upper_bound() const
{
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [](const Uniform& u) { return u.hi; },
                          [](const Normal& n) { return n.mean + 4 * n.sigma; },
                          [](const LogNormal& l) { return l.sigma == 0 ? l.median : l.cap; },
                      },
                      spec_);
}

bool Distribution::operator==(const Distribution& other) const
{
    return std::visit(
        [](const auto& a, const auto& b) {
            using A = std::decay_t<decltype(a)>;
            using B = std::decay_t<decltype(b)>;
            if constexpr (!std::is_same_v<A, B>) {
                return false;
            } else if constexpr (std::is_same_v<A, Constant>) {
                return a.value == b.value;
            } else if constexpr (std::is_same_v<A, Uniform>) {
                return a.lo == b.lo && a.hi == b.hi;
            } else if constexpr (std::is_same_v<A, Normal>) {
                return a.mean == b.mean && a.sigma == b.sigma;
            } else {
                return a.median == b.median && a.sigma == b.sigma && a.cap == b.cap;
            }
        },
        spec_, other.spec_);
}

} // namespace chainsync
