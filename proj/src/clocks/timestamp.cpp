#include "chainsync/clocks/timestamp.hpp"

#include <cmath>
#include <stdexcept>

namespace chainsync::clocks {

TimestampModel::TimestampModel(StampKind kind, Distribution noise) : kind_(kind), noise_(noise)
{
    if (kind_ == StampKind::Software && noise_.lower_bound() < 0)
        throw std::invalid_argument("software timestamp noise must be non-negative");
}

TimestampModel TimestampModel::hardware_default()
{
    return {StampKind::Hardware, Distribution::normal(0, 50)};
}

Stamp stamp(const TimestampModel& model, DisciplinedClock& clock, SimTime true_time, RngStream& stream)
{
    const LocalTime reading =
        model.kind() == StampKind::Software ? clock.local_now(true_time) : clock.peek(true_time);
    double noise = model.noise().sample(stream);
    if (const double jitter = clock.oscillator().jitter_sigma_ns; jitter > 0)
        noise += Distribution::normal(0, jitter).sample(stream);
    const auto n = static_cast<Duration>(std::llround(noise));
    return Stamp{reading + n, n};
}

} // namespace chainsync::clocks
