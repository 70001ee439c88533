#include "chainsync/pubsub/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chainsync::pubsub {

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records, LocalTime epoch)
{
    out << kTraceCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.topic << ',' << r.seq << ',' << r.t_pub << ',';
        if (!r.dropped)
            out << r.t_sub;
        out << ',' << epoch + static_cast<LocalTime>(r.true_send.ns()) << ',';
        if (!r.dropped)
            out << epoch + static_cast<LocalTime>(r.true_recv.ns());
        out << ',' << (r.dropped ? 1 : 0) << '\n';
    }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in, LocalTime epoch)
{
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader)
        throw std::runtime_error("trace CSV: unexpected header");
    std::vector<TraceRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (!line.empty() && line.back() == ',')
            f.emplace_back();
        if (f.size() != 7)
            throw std::runtime_error("trace CSV line " + std::to_string(lineno) + ": expected 7 fields");
        try {
            TraceRecord r;
            r.topic = f[0];
            r.seq = std::stoull(f[1]);
            r.t_pub = std::stoll(f[2]);
            r.dropped = f[6] == "1";
            r.true_send = SimTime(static_cast<std::uint64_t>(std::stoll(f[4]) - epoch));
            if (!r.dropped) {
                r.t_sub = std::stoll(f[3]);
                r.true_recv = SimTime(static_cast<std::uint64_t>(std::stoll(f[5]) - epoch));
            }
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw std::runtime_error("trace CSV line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

} // namespace chainsync::pubsub
