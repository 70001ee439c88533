#pragma once

#include "chainsync/engine/sim_time.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace chainsync::pubsub {

/// One published message as seen by the trace recorder.
struct TraceRecord {
    std::string topic;
    std::uint64_t seq = 0;
    LocalTime t_pub = 0;
    LocalTime t_sub = 0;
    /// True times of the two stamps, ns since simulation start.
    SimTime true_send{};
    SimTime true_recv{};
    bool dropped = false;

    // Oracle fields: clock error (local - true POSIX time) and stamp noise at
    // each end. Not part of the CSV.
    Duration pub_clock_error = 0;
    Duration pub_noise = 0;
    Duration sub_clock_error = 0;
    Duration sub_noise = 0;
};

/// Header line of the trace CSV.
inline constexpr const char* kTraceCsvHeader = "topic,seq,t_pub_ns,t_sub_ns,true_send_ns,true_recv_ns,dropped";

/// Writes records as CSV. True times are shifted by `epoch` onto the POSIX
/// axis; t_sub and true_recv are empty for dropped messages.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records, LocalTime epoch);

/// Inverse of write_trace_csv (oracle fields are zero).
[[nodiscard]] std::vector<TraceRecord> read_trace_csv(std::istream& in, LocalTime epoch);

} // namespace chainsync::pubsub
