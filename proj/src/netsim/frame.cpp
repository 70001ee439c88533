#include "chainsync/netsim/frame.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace chainsync::netsim {

std::string_view to_string(FrameKind kind)
{
    switch (kind) {
    case FrameKind::Ptp:
        return "ptp";
    case FrameKind::Topic:
        return "topic";
    case FrameKind::Background:
        return "background";
    }
    return "unknown";
}

std::uint32_t frame_size_for_payload(std::uint32_t payload)
{
    if (payload > kMaxPayload) {
        throw std::invalid_argument("payload of " + std::to_string(payload) + " B exceeds one MTU (" +
                                    std::to_string(kMaxPayload) + " B)");
    }
    return std::max(kMinFrameSize, payload + kL2Overhead + kL3Overhead);
}

Duration wire_time(std::uint32_t frame_size, std::uint64_t rate_bps)
{
    const std::uint64_t scaled = std::uint64_t{frame_size + kPreambleAndGap} * 8U * 1'000'000'000U;
    return static_cast<Duration>((scaled + rate_bps - 1) / rate_bps);
}

} // namespace chainsync::netsim
