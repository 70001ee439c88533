#include "chainsync/analysis/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace chainsync::analysis {

std::string fmt(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos)
        s = s.front() == '-' ? s.substr(1) : s;
    return s;
}

namespace {

std::vector<Duration> offsets_of(const PeriodOffsetSeries& s)
{
    std::vector<Duration> v;
    v.reserve(s.samples.size());
    for (const auto& x : s.samples)
        v.push_back(x.offset);
    return v;
}

void write_stats(std::ostream& out, const std::string& prefix, const SummaryStats& s)
{
    out << prefix << ".count = " << s.count << '\n'
        << prefix << ".min_ns = " << s.min << '\n'
        << prefix << ".mean_ns = " << fmt(s.mean) << '\n'
        << prefix << ".max_ns = " << s.max << '\n'
        << prefix << ".stddev_ns = " << fmt(s.stddev) << '\n'
        << prefix << ".p50_ns = " << s.p50 << '\n'
        << prefix << ".p99_ns = " << s.p99 << '\n'
        << prefix << ".p999_ns = " << s.p999 << '\n';
}

void write_fit(std::ostream& out, const std::string& prefix, const std::optional<DriftFit>& f)
{
    if (!f) {
        out << prefix << ".slope_ns_per_period = n/a\n";
        return;
    }
    out << prefix << ".slope_ns_per_period = " << fmt(f->slope, 6) << '\n'
        << prefix << ".fit_ambiguous = " << (f->ambiguous ? "true" : "false") << '\n';
}

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& x : v)
        s += (s.empty() ? "" : ",") + x;
    return s;
}

} // namespace

Report analyze(const RunData& run)
{
    Report r;
    r.scenario = run.scenario;
    r.seed = run.seed;
    r.epoch = run.epoch;
    r.duration = run.duration;
    r.chain = run.chain;
    r.frames = run.frames;
    r.events = run.events;
    r.event_digest = run.event_digest;
    r.gated_transmissions = run.gated_transmissions;
    r.violations = run.violations;
    r.synchronized = run.ptp_enabled && run.all_locked_at.has_value();
    r.stats_from = r.synchronized ? *run.all_locked_at : SimTime{};

    std::vector<Duration> all_latencies;
    for (const auto& t : run.topics) {
        TopicReport tr;
        tr.name = t.name;
        tr.period = t.period;
        for (const auto& rec : run.trace) {
            if (rec.topic != t.name)
                continue;
            ++tr.published;
            if (rec.dropped)
                ++tr.dropped;
            else
                ++tr.delivered;
        }
        const auto pub = offset_series(run.trace, t.name, t.period, StampColumn::Pub, r.stats_from);
        const auto sub = offset_series(run.trace, t.name, t.period, StampColumn::Sub, r.stats_from);
        tr.dt_pub = summarize(offsets_of(pub));
        tr.dt_sub = summarize(offsets_of(sub));
        tr.dt_pub_hist = histogram(offsets_of(pub), kOffsetBinWidth);
        tr.dt_sub_hist = histogram(offsets_of(sub), kOffsetBinWidth);
        if (pub.samples.size() >= 2)
            tr.dt_pub_fit = drift_fit(pub);
        if (sub.samples.size() >= 2) {
            tr.dt_sub_fit = drift_fit(sub);
            const auto u = unwrap(sub);
            tr.dt_sub_cumulative_drift = static_cast<Duration>(u.value.back() - u.value.front());
        }
        if (r.synchronized) {
            std::vector<const pubsub::TraceRecord*> recs;
            for (const auto& rec : run.trace) {
                if (rec.topic == t.name && !rec.dropped && rec.true_send >= r.stats_from)
                    recs.push_back(&rec);
            }
            std::stable_sort(recs.begin(), recs.end(), [](auto* a, auto* b) { return a->seq < b->seq; });
            for (const auto* rec : recs)
                tr.latencies.push_back(latency(*rec, true));
            tr.latency = summarize(tr.latencies);
            tr.latency_hist = histogram(tr.latencies, kLatencyBinWidth);
            all_latencies.insert(all_latencies.end(), tr.latencies.begin(), tr.latencies.end());
        }
        r.topics.push_back(std::move(tr));
    }
    if (r.synchronized) {
        r.latency_all = summarize(all_latencies);
        const auto in_band = std::count_if(all_latencies.begin(), all_latencies.end(), [](Duration l) {
            return l >= 1 * kMillisecond && l <= 2 * kMillisecond;
        });
        r.latency_in_1_2ms =
            all_latencies.empty() ? 0.0 : static_cast<double>(in_band) / static_cast<double>(all_latencies.size());
    }

    r.ptp.enabled = run.ptp_enabled;
    r.ptp.all_locked_at = run.all_locked_at;
    r.ptp.lock_losses = run.lock_losses;
    if (run.ptp_enabled) {
        r.ptp.per_second = ptp::max_offset_series(run.ptp_records, kSecond);
        if (run.all_locked_at) {
            // Only whole seconds that start after the last slave locked.
            const auto first = static_cast<std::int64_t>((run.all_locked_at->ns() + kSecond - 1) / kSecond);
            for (const auto& m : r.ptp.per_second) {
                if (m.index < first)
                    continue;
                r.ptp.max_after_lock = std::max(r.ptp.max_after_lock, m.max_abs_offset);
                if (m.max_abs_offset >= 1 * kMicrosecond)
                    ++r.ptp.seconds_over_1us_after_lock;
            }
        }
    }
    return r;
}

void write_report(std::ostream& out, const Report& r)
{
    char seed[32];
    std::snprintf(seed, sizeof seed, "0x%llX", static_cast<unsigned long long>(r.seed));
    out << "[run]\n"
        << "scenario = " << r.scenario << '\n'
        << "seed = " << seed << '\n'
        << "epoch_ns = " << r.epoch << '\n'
        << "duration_ns = " << r.duration << '\n'
        << "events = " << r.events << '\n'
        << "event_digest = " << r.event_digest << '\n'
        << "synchronized = " << (r.synchronized ? "true" : "false") << '\n'
        << "stats_from_ns = " << r.stats_from.ns() << '\n'
        << "invariant_violations = " << r.violations.size() << '\n';
    for (std::size_t i = 0; i < r.violations.size(); ++i)
        out << "violation." << i << " = " << r.violations[i] << '\n';

    out << "\n[topology]\nchain = " << join(r.chain) << '\n';
    std::vector<std::string> names;
    for (const auto& t : r.topics)
        names.push_back(t.name);
    out << "topics = " << join(names) << '\n';

    out << "\n[ptp]\nenabled = " << (r.ptp.enabled ? "true" : "false") << '\n';
    if (r.ptp.enabled) {
        out << "all_locked_at_ns = " << (r.ptp.all_locked_at ? std::to_string(r.ptp.all_locked_at->ns()) : "never")
            << '\n'
            << "lock_losses = " << r.ptp.lock_losses << '\n'
            << "max_offset_after_lock_ns = " << r.ptp.max_after_lock << '\n'
            << "seconds_over_1us_after_lock = " << r.ptp.seconds_over_1us_after_lock << '\n';
    }

    out << "\n[latency]\n";
    if (r.latency_all) {
        write_stats(out, "all", *r.latency_all);
        out << "fraction_in_1_2ms = " << fmt(r.latency_in_1_2ms, 6) << '\n';
    } else {
        out << "status = refused: clocks not synchronized\n";
    }

    for (const auto& t : r.topics) {
        out << "\n[topic." << t.name << "]\n"
            << "period_ns = " << t.period << '\n'
            << "published = " << t.published << '\n'
            << "delivered = " << t.delivered << '\n'
            << "dropped = " << t.dropped << '\n';
        write_stats(out, "dt_pub", t.dt_pub);
        out << "dt_pub.support_width_ns = " << t.dt_pub_hist.support_width() << '\n';
        write_fit(out, "dt_pub", t.dt_pub_fit);
        write_stats(out, "dt_sub", t.dt_sub);
        out << "dt_sub.support_width_ns = " << t.dt_sub_hist.support_width() << '\n';
        write_fit(out, "dt_sub", t.dt_sub_fit);
        out << "dt_sub.cumulative_drift_ns = " << t.dt_sub_cumulative_drift << '\n';
        if (t.latency)
            write_stats(out, "latency", *t.latency);
        else
            out << "latency = refused\n";
    }

    out << "\n[network]\n";
    for (int pcp = 0; pcp < netsim::kNumClasses; ++pcp) {
        const auto& c = r.frames[pcp];
        if (c.sent == 0)
            continue;
        out << "pcp" << pcp << ".sent = " << c.sent << '\n'
            << "pcp" << pcp << ".delivered = " << c.delivered << '\n'
            << "pcp" << pcp << ".dropped = " << c.dropped << '\n';
    }
    out << "gated_transmissions = " << r.gated_transmissions << '\n';
}

void write_dt_csv(std::ostream& out, const RunData& run, StampColumn column)
{
    out << "topic,seq,period_index,offset_ns\n";
    for (const auto& t : run.topics) {
        std::vector<const pubsub::TraceRecord*> recs;
        for (const auto& rec : run.trace) {
            if (rec.topic == t.name && !(column == StampColumn::Sub && rec.dropped))
                recs.push_back(&rec);
        }
        std::stable_sort(recs.begin(), recs.end(), [](auto* a, auto* b) { return a->seq < b->seq; });
        for (const auto* rec : recs) {
            const LocalTime ts = column == StampColumn::Pub ? rec->t_pub : rec->t_sub;
            out << t.name << ',' << rec->seq << ',' << floor_div(ts, t.period) << ',' << period_offset(ts, t.period)
                << '\n';
        }
    }
}

void write_latency_csv(std::ostream& out, const Report& r)
{
    out << "topic,index,latency_ns\n";
    for (const auto& t : r.topics) {
        for (std::size_t i = 0; i < t.latencies.size(); ++i)
            out << t.name << ',' << i << ',' << t.latencies[i] << '\n';
    }
}

void write_ptp_offsets_csv(std::ostream& out, const RunData& run)
{
    out << "at_ns,slave,estimated_offset_ns,true_offset_ns,path_delay_ns,locked\n";
    for (const auto& rec : run.ptp_records) {
        out << rec.at.ns() << ',' << rec.slave << ',' << rec.estimated_offset << ',' << rec.true_offset << ','
            << rec.path_delay << ',' << (rec.locked ? 1 : 0) << '\n';
    }
}

void write_ptp_max_offset_csv(std::ostream& out, const Report& r)
{
    out << "second,max_abs_true_offset_ns\n";
    for (const auto& m : r.ptp.per_second)
        out << m.index << ',' << m.max_abs_offset << '\n';
}

void write_histograms_csv(std::ostream& out, const Report& r)
{
    out << "series,topic,bin_start_ns,bin_width_ns,count\n";
    const auto dump = [&](const char* series, const std::string& topic, const Histogram& h) {
        for (const auto& [bin, count] : h.bins)
            out << series << ',' << topic << ',' << bin * h.bin_width << ',' << h.bin_width << ',' << count << '\n';
    };
    for (const auto& t : r.topics) {
        dump("dt_pub", t.name, t.dt_pub_hist);
        dump("dt_sub", t.name, t.dt_sub_hist);
        if (t.latency_hist)
            dump("latency", t.name, *t.latency_hist);
    }
}

} // namespace chainsync::analysis
