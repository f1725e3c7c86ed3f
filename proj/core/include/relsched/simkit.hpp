#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "relsched/analytic.hpp"
#include "relsched/guard.hpp"
#include "relsched/scheduler.hpp"

namespace relsched {

// Order in which a replay feeds objects to the scheduler.
//
// kRecovery: ascending recovery time, ties by seq (what a live receiver sees).
// kSequence: ascending seq, the iteration order of the fixed-point analysis. Used
//   for synthetic patterns, whose peaks recover after the following valley.
enum class ProcessingOrder { kRecovery, kSequence };

std::string_view to_string(ProcessingOrder order);
ProcessingOrder parse_order(std::string_view name);

struct ReplayOptions {
    ProcessingOrder order = ProcessingOrder::kRecovery;
    std::size_t warmup = 0;  // leading objects (by seq) excluded from steady-state metrics
};

// Event n: S = n * inter_send, A = S + (n % period == 0 ? peak : valley).
std::vector<RecoveryEvent> gen_pattern(const PatternSpec& spec);

struct ScheduleTrace {
    // Parallel arrays in processing order.
    std::vector<RecoveryEvent> events;
    std::vector<ReleaseDecision> releases;
    std::vector<StepRecord> steps;
    SchedulerConfig params_used;
    ReplayOptions options;

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }
};

// Parameter validation runs before any event is processed. Duplicate seq values
// are rejected with DataError.
ScheduleTrace replay(std::span<const RecoveryEvent> events, const SchedulerConfig& config,
                     const ReplayOptions& options = {});

// Unsmoothed baseline: every object released at its recovery time.
ScheduleTrace identity_schedule(std::span<const RecoveryEvent> events,
                                const ReplayOptions& options = {});

struct SeriesPercentiles {
    Micros p50 = 0;
    Micros p90 = 0;
    Micros p95 = 0;
    Micros p99 = 0;
};

// Nearest-rank, consistent with the adaptation statistics. Empty series -> nullopt.
std::optional<SeriesPercentiles> summarize(std::span<const Micros> series);

struct MetricsReport {
    std::size_t count = 0;           // objects covered after warm-up skipping
    std::size_t warmup_skipped = 0;
    // Interval series are taken between consecutive objects in seq order.
    std::vector<Micros> inter_release;
    std::vector<Micros> inter_send;
    std::vector<Micros> added_delay;     // T - A
    std::vector<Micros> cadence_error;   // inter_release - inter_send
    std::optional<SeriesPercentiles> inter_release_pct;
    std::optional<SeriesPercentiles> inter_send_pct;
    std::optional<SeriesPercentiles> added_delay_pct;
    std::optional<SeriesPercentiles> cadence_error_pct;
    std::optional<SeriesPercentiles> abs_cadence_error_pct;
    std::size_t inversion_count = 0;  // negative inter-release intervals
    std::size_t excursion_events = 0;  // |inter_release - nominal| > threshold
    Micros nominal_interval = 0;       // p50 of inter_send
    Micros excursion_threshold = 0;
    std::size_t overtakes = 0;
};

// Throws DataError on an empty trace. `threshold` defaults to nominal / 4.
MetricsReport compute_metrics(const ScheduleTrace& trace, std::optional<Micros> threshold = {},
                              bool skip_warmup = true);

// Per-object values in seq order, convenient for cycle analysis.
struct SeqSeries {
    std::vector<std::uint64_t> seq;
    std::vector<double> release_minus_send;  // T - S, microseconds
    std::vector<double> inter_release;       // T_n - T_{n-1}; first entry is 0
    std::vector<double> offset_before;       // D used at each object
};

SeqSeries seq_series(const ScheduleTrace& trace);

struct SteadyCycle {
    std::size_t period = 0;
    std::size_t start = 0;  // index of the first value within the input series
    std::vector<double> values;
};

// Finds the smallest multiple k * base_period (k <= max_multiple) for which the last
// two consecutive windows agree within `tol`, and returns the last full window whose
// start index s satisfies (s + align) % period == 0.
std::optional<SteadyCycle> extract_cycle(std::span<const double> series, std::size_t base_period,
                                         double tol, std::size_t align = 0,
                                         std::size_t max_multiple = 8);

}  // namespace relsched
