#pragma once

#include "chainsync/engine/rng.hpp"

#include <string>
#include <variant>

namespace chainsync {

/// Value distributions used for noise sources and scenario parameters.
///
/// Values are plain doubles; time-valued distributions are in nanoseconds.
/// Parameters are validated on construction, so an invalid spec never reaches
/// a running simulation.
class Distribution {
public:
    struct Constant {
        double value = 0;
    };
    struct Uniform {
        double lo = 0;
        double hi = 0;
    };
    /// Normal truncated at +/- 4 sigma (rejection-resampled).
    struct Normal {
        double mean = 0;
        double sigma = 0;
    };
    /// exp(ln(median) + sigma * Z), clipped at cap.
    struct LogNormal {
        double median = 1;
        double sigma = 0;
        double cap = 0;
    };

    using Spec = std::variant<Constant, Uniform, Normal, LogNormal>;

    Distribution() : spec_(Constant{0}) {}

    static Distribution constant(double v);
    static Distribution uniform(double lo, double hi);
    static Distribution normal(double mean, double sigma);
    static Distribution lognormal(double median, double sigma, double cap);

    [[nodiscard]] double sample(RngStream& stream) const;

    /// Smallest and largest value the distribution can produce.
    [[nodiscard]] double lower_bound() const;
    [[nodiscard]] double upper_bound() const;

    [[nodiscard]] const Spec& spec() const noexcept { return spec_; }

    bool operator==(const Distribution& other) const;

private:
    explicit Distribution(Spec s) : spec_(s) {}
    Spec spec_;
};

} // namespace chainsync
