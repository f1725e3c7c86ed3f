#include "relsched/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

namespace relsched {

std::string_view to_string(ProcessingOrder order) {
    return order == ProcessingOrder::kRecovery ? "recovery" : "sequence";
}

ProcessingOrder parse_order(std::string_view name) {
    if (name == "recovery") {
        return ProcessingOrder::kRecovery;
    }
    if (name == "sequence") {
        return ProcessingOrder::kSequence;
    }
    throw ParamError("unknown processing order '" + std::string(name) + "'");
}

std::vector<RecoveryEvent> gen_pattern(const PatternSpec& spec) {
    validate(spec, /*allow_flat=*/true);
    std::vector<RecoveryEvent> events;
    events.reserve(spec.count);
    for (std::size_t n = 0; n < spec.count; ++n) {
        const Micros send = static_cast<Micros>(n) * spec.inter_send;
        const Micros delay = n % spec.period == 0 ? spec.peak_delay : spec.valley_delay;
        events.push_back(RecoveryEvent{n, send, send + delay, std::nullopt});
    }
    return events;
}

namespace {

std::vector<RecoveryEvent> ordered_copy(std::span<const RecoveryEvent> events, ProcessingOrder order) {
    std::vector<RecoveryEvent> out(events.begin(), events.end());
    if (order == ProcessingOrder::kRecovery) {
        std::stable_sort(out.begin(), out.end(), [](const RecoveryEvent& a, const RecoveryEvent& b) {
            return a.recovery_ts != b.recovery_ts ? a.recovery_ts < b.recovery_ts : a.seq < b.seq;
        });
    } else {
        std::stable_sort(out.begin(), out.end(),
                         [](const RecoveryEvent& a, const RecoveryEvent& b) { return a.seq < b.seq; });
    }
    for (const RecoveryEvent& e : out) {
        if (e.recovery_ts < 0) {
            throw DataError("negative recovery timestamp at seq " + std::to_string(e.seq));
        }
    }
    return out;
}

void check_unique_seq(std::span<const RecoveryEvent> events) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(events.size());
    for (const RecoveryEvent& e : events) {
        if (!seen.insert(e.seq).second) {
            throw DataError("duplicate sequence number " + std::to_string(e.seq));
        }
    }
}

// Indices of the trace's entries sorted by seq.
std::vector<std::size_t> seq_permutation(const ScheduleTrace& trace) {
    std::vector<std::size_t> idx(trace.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return trace.events[a].seq < trace.events[b].seq;
    });
    return idx;
}

}  // namespace

ScheduleTrace replay(std::span<const RecoveryEvent> events, const SchedulerConfig& config,
                     const ReplayOptions& options) {
    validate(config);
    check_unique_seq(events);

    ScheduleTrace trace;
    trace.params_used = config;
    trace.options = options;
    trace.events = ordered_copy(events, options.order);
    trace.steps.reserve(trace.size());

    ReleaseScheduler scheduler(config);
    for (const RecoveryEvent& e : trace.events) {
        trace.steps.push_back(scheduler.on_recovery(e));
    }

    trace.releases.resize(trace.size());
    if (config.variant != Variant::kQadcGuard) {
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const StepRecord& s = trace.steps[i];
            trace.releases[i] = ReleaseDecision{s.seq, s.candidate_ts, s.candidate_ts, false};
        }
        return trace;
    }

    const std::vector<std::size_t> by_seq = seq_permutation(trace);
    std::vector<GuardCandidate> candidates;
    candidates.reserve(by_seq.size());
    for (std::size_t i : by_seq) {
        const StepRecord& s = trace.steps[i];
        candidates.push_back(GuardCandidate{s.seq, s.candidate_ts, s.guard, s.bypassed});
    }
    const std::vector<ReleaseDecision> decisions = apply_guard(candidates);
    for (std::size_t k = 0; k < by_seq.size(); ++k) {
        trace.releases[by_seq[k]] = decisions[k];
    }
    return trace;
}

ScheduleTrace identity_schedule(std::span<const RecoveryEvent> events, const ReplayOptions& options) {
    SchedulerConfig config;
    config.variant = Variant::kIdentity;
    return replay(events, config, options);
}

std::optional<SeriesPercentiles> summarize(std::span<const Micros> series) {
    if (series.empty()) {
        return std::nullopt;
    }
    return SeriesPercentiles{percentile_nearest_rank(series, 50.0), percentile_nearest_rank(series, 90.0),
                             percentile_nearest_rank(series, 95.0), percentile_nearest_rank(series, 99.0)};
}

MetricsReport compute_metrics(const ScheduleTrace& trace, std::optional<Micros> threshold, bool skip_warmup) {
    if (trace.empty()) {
        throw DataError("cannot compute metrics of an empty trace");
    }
    if (threshold && *threshold < 0) {
        throw ParamError("excursion threshold must be >= 0");
    }
    const std::vector<std::size_t> by_seq = seq_permutation(trace);
    std::size_t skip = skip_warmup ? std::min(trace.options.warmup, by_seq.size()) : 0;
    // Keep at least one object so the report stays well defined.
    skip = std::min(skip, by_seq.size() - 1);

    MetricsReport r;
    r.warmup_skipped = skip;
    r.count = by_seq.size() - skip;
    for (std::size_t k = skip; k < by_seq.size(); ++k) {
        const std::size_t i = by_seq[k];
        const RecoveryEvent& e = trace.events[i];
        const ReleaseDecision& d = trace.releases[i];
        r.added_delay.push_back(d.release_ts - e.recovery_ts);
        r.overtakes += d.overtook_predecessor ? 1 : 0;
        if (k == skip) {
            continue;
        }
        const std::size_t prev = by_seq[k - 1];
        const Micros ir = d.release_ts - trace.releases[prev].release_ts;
        const Micros is = e.sender_ts - trace.events[prev].sender_ts;
        r.inter_release.push_back(ir);
        r.inter_send.push_back(is);
        r.cadence_error.push_back(ir - is);
        r.inversion_count += ir < 0 ? 1 : 0;
    }

    r.inter_release_pct = summarize(r.inter_release);
    r.inter_send_pct = summarize(r.inter_send);
    r.added_delay_pct = summarize(r.added_delay);
    r.cadence_error_pct = summarize(r.cadence_error);
    std::vector<Micros> abs_err(r.cadence_error.size());
    std::transform(r.cadence_error.begin(), r.cadence_error.end(), abs_err.begin(),
                   [](Micros v) { return v < 0 ? -v : v; });
    r.abs_cadence_error_pct = summarize(abs_err);

    r.nominal_interval = r.inter_send_pct ? r.inter_send_pct->p50 : 0;
    r.excursion_threshold = threshold.value_or(r.nominal_interval / 4);
    for (Micros ir : r.inter_release) {
        const Micros dev = ir - r.nominal_interval;
        if ((dev < 0 ? -dev : dev) > r.excursion_threshold) {
            ++r.excursion_events;
        }
    }
    return r;
}

SeqSeries seq_series(const ScheduleTrace& trace) {
    SeqSeries out;
    const std::vector<std::size_t> by_seq = seq_permutation(trace);
    for (std::size_t k = 0; k < by_seq.size(); ++k) {
        const std::size_t i = by_seq[k];
        const Micros release = trace.releases[i].release_ts;
        out.seq.push_back(trace.events[i].seq);
        out.release_minus_send.push_back(static_cast<double>(release - trace.events[i].sender_ts));
        out.inter_release.push_back(
            k == 0 ? 0.0 : static_cast<double>(release - trace.releases[by_seq[k - 1]].release_ts));
        out.offset_before.push_back(trace.steps[i].offset_before);
    }
    return out;
}

std::optional<SteadyCycle> extract_cycle(std::span<const double> series, std::size_t base_period,
                                         double tol, std::size_t align, std::size_t max_multiple) {
    if (base_period == 0) {
        throw ParamError("cycle base period must be > 0");
    }
    const std::size_t n = series.size();
    for (std::size_t k = 1; k <= max_multiple; ++k) {
        const std::size_t len = k * base_period;
        if (2 * len > n) {
            break;
        }
        bool periodic = true;
        for (std::size_t i = n - len; i < n && periodic; ++i) {
            periodic = std::abs(series[i] - series[i - len]) <= tol;
        }
        if (!periodic) {
            continue;
        }
        std::size_t start = n - len;
        while ((start + align) % len != 0) {
            --start;
        }
        SteadyCycle c;
        c.period = len;
        c.start = start;
        c.values.assign(series.begin() + static_cast<std::ptrdiff_t>(start),
                        series.begin() + static_cast<std::ptrdiff_t>(start + len));
        return c;
    }
    return std::nullopt;
}

}  // namespace relsched
