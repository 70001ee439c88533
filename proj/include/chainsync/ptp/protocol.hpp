#pragma once

#include "chainsync/clocks/timestamp.hpp"
#include "chainsync/netsim/network.hpp"
#include "chainsync/ptp/delay_filter.hpp"
#include "chainsync/ptp/exchange.hpp"
#include "chainsync/ptp/offset_stats.hpp"
#include "chainsync/ptp/servo.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace chainsync::ptp {

enum class PortRole { Master, Slave };

struct PtpConfig {
    Duration sync_interval = 125 * kMillisecond;
    Duration delay_req_interval = 1 * kSecond;
    /// Delay requests go out uniformly within this span after a sync.
    Duration delay_req_spread = 10 * kMillisecond;
    std::uint8_t pcp = 7;
    std::uint32_t frame_size = 90;
    Distribution stamp_noise = Distribution::normal(0, 50);
    ServoConfig servo{};
    DelayFilterConfig delay_filter{};
    /// The servo waits for this many accepted path-delay samples.
    std::size_t min_delay_samples = 8;
    /// Delay requests follow every sync until this many samples are in.
    std::size_t fast_start_samples = 64;
};

/// Per-slave protocol state, as seen from the slave.
struct SlaveStatus {
    netsim::NodeId node = 0;
    bool locked = false;
    std::optional<SimTime> first_lock;
    int lock_losses = 0;
    int phase_steps = 0;
    std::uint64_t syncs_received = 0;
    std::uint64_t samples_discarded = 0;
    std::size_t delay_outliers = 0;
    std::optional<Duration> path_delay;
};

/// One synchronization domain: a single static master sending two-step sync
/// to every slave (unicast), end-to-end delay request/response, hardware
/// timestamps at the MAC (t1/t3 at egress start, t2/t4 at receive complete).
class PtpDomain {
public:
    using ClockLookup = std::function<clocks::DisciplinedClock&(netsim::NodeId)>;

    PtpDomain(netsim::Network& network, ClockLookup clocks, netsim::NodeId master,
              std::vector<netsim::NodeId> slaves, PtpConfig config = {});

    PtpDomain(const PtpDomain&) = delete;
    PtpDomain& operator=(const PtpDomain&) = delete;

    void start(SimTime at);

    [[nodiscard]] const PtpConfig& config() const noexcept { return config_; }
    [[nodiscard]] netsim::NodeId master() const noexcept { return master_; }
    [[nodiscard]] PortRole role(netsim::NodeId node) const;

    [[nodiscard]] const std::vector<OffsetRecord>& records() const noexcept { return records_; }
    [[nodiscard]] std::vector<SlaveStatus> status() const;

    /// True once every slave has locked at least once.
    [[nodiscard]] bool all_locked_once() const;
    /// Time the last slave first locked.
    [[nodiscard]] std::optional<SimTime> all_locked_at() const;
    [[nodiscard]] int total_lock_losses() const;

    /// Called on every servo lock-state change (slave, locked, at).
    void set_lock_observer(std::function<void(netsim::NodeId, bool, SimTime)> obs) { lock_observer_ = std::move(obs); }

private:
    struct Slave {
        Slave(netsim::NodeId n, const PtpConfig& c, RngStream stamps, RngStream dreq)
            : node(n), servo(c.servo), filter(c.delay_filter), stamp_stream(std::move(stamps)),
              dreq_stream(std::move(dreq))
        {
        }

        netsim::NodeId node = 0;
        PiServo servo;
        DelayFilter filter;
        RngStream stamp_stream;
        RngStream dreq_stream;
        std::uint64_t phase_epoch = 0;
        std::map<std::uint64_t, std::pair<LocalTime, std::uint64_t>> t2_by_seq;
        std::optional<SimTime> last_delay_req;
        bool locked = false;
        std::optional<SimTime> first_lock;
        std::uint64_t syncs = 0;
        std::uint64_t discarded = 0;
        std::optional<Duration> last_delay;
    };

    void send_sync_round();
    void send_sync(Slave& s, std::uint64_t seq);
    void on_sync_arrival(Slave& s, std::uint64_t seq, SimTime at);
    void on_follow_up(Slave& s, std::uint64_t seq, LocalTime t1, SimTime at);
    void send_delay_req(Slave& s, SyncSample base, std::uint64_t epoch);
    void on_delay_resp(Slave& s, const SyncSample& sample);
    void run_servo(Slave& s, Duration offset, Duration true_offset, SimTime at);
    netsim::Frame make_frame(netsim::NodeId src, netsim::NodeId dst) const;
    LocalTime hw_stamp(netsim::NodeId node, RngStream& stream, SimTime at);

    netsim::Network& network_;
    ClockLookup clocks_;
    netsim::NodeId master_;
    PtpConfig config_;
    clocks::TimestampModel stamp_model_;
    RngStream master_stream_;
    std::vector<std::unique_ptr<Slave>> slaves_;
    std::uint64_t sync_seq_ = 0;
    std::vector<OffsetRecord> records_;
    std::function<void(netsim::NodeId, bool, SimTime)> lock_observer_;
};

} // namespace chainsync::ptp
