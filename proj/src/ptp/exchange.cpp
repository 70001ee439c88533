#include "chainsync/ptp/exchange.hpp"

namespace chainsync::ptp {

std::optional<OffsetDelay> compute_offset_delay(const SyncSample& s)
{
    if (!s.complete())
        return std::nullopt;
    const Duration ms = *s.t2 - *s.t1;
    const Duration sm = *s.t4 - *s.t3;
    return OffsetDelay{(ms - sm) / 2, (ms + sm) / 2};
}

} // namespace chainsync::ptp
