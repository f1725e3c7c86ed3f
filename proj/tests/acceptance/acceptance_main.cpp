// Acceptance gate: runs criteria 1-8 and prints one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "relsched/analytic.hpp"
#include "relsched/scheduler.hpp"
#include "relsched/simkit.hpp"

namespace relsched {
namespace {

// Golden runs.
constexpr double kGoldenLambda = 0.2;
constexpr double kGoldenEpsilon = 0.2;
constexpr Micros kGoldenClip = 100 * kMicrosPerMilli;
constexpr Micros kInactiveClamp = 10 * kMicrosPerSecond;
constexpr std::size_t kGoldenCount = 5000;
constexpr std::size_t kGoldenWarmup = 500;
constexpr double kCycleMatchTol = 2.0;  // us, periodicity test on the settled series

// Criterion 1.
constexpr double kC1OffsetTolMs = 0.15;
constexpr double kC1IntervalTolMs = 0.3;
constexpr double kC1RuntimeSec = 1.0;
// Criterion 2.
constexpr double kC2BandLoMs = 97.4;
constexpr double kC2BandHiMs = 101.0;
constexpr double kC2CycleTolMs = 0.4;
// Criteria 3 and 4.
constexpr double kC34CycleTolMs = 0.3;
constexpr double kC3OutlierTolMs = 0.5;
constexpr double kC4PeakIntervalTolMs = 0.3;
constexpr double kC4ValleyLoMs = 16.2;
constexpr double kC4ValleyHiMs = 16.5;
// Criterion 5.
constexpr int kC5Draws = 20;
constexpr double kC5Lambda = 1e-3;
constexpr std::size_t kC5Events = 200000;
constexpr double kC5RelTol = 0.01;
constexpr double kC5RuntimeSec = 30.0;
constexpr Micros kC5Peak = kMicrosPerSecond;  // U = d_H = 1 in normalized units
// Criterion 6.
constexpr double kC6LinearRelTol = 1e-12;
constexpr double kC6ExponentRelTol = 1e-9;
constexpr int kC6Draws = 1000;
// Criterion 7.
constexpr int kC7Draws = 1000;
// Criterion 8.
constexpr int kC8Cases = 10000;

constexpr std::uint64_t kSeed = 0x5eedf00dULL;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Report {
public:
    void require(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 8) {
            failures_.push_back(what);
        }
        pass_ = pass_ && ok;
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }

    Outcome done() const {
        Outcome o{pass_, notes_};
        for (const auto& f : failures_) {
            o.detail += " | " + f;
        }
        return o;
    }

private:
    bool pass_ = true;
    std::string notes_;
    std::vector<std::string> failures_;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string join_ms(std::span<const double> us) {
    std::string s = "{";
    for (std::size_t i = 0; i < us.size(); ++i) {
        s += fmt(i ? ", %.2f" : "%.2f", us[i] / 1000.0);
    }
    return s + "}";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SchedulerConfig golden_config(double rho_u, double rho_l) {
    SchedulerConfig c;
    c.variant = Variant::kAdc;
    c.adc.rho_u = rho_u;
    c.adc.rho_l = rho_l;
    const Gains g = split_gains(kGoldenLambda, kGoldenEpsilon);
    c.adc.lambda_u = g.up;
    c.adc.lambda_l = g.down;
    c.adc.clip_u = kGoldenClip;
    c.adc.max_delay = kInactiveClamp;
    c.adc.neutral_band = 0;
    return c;
}

struct Golden {
    SeqSeries series;
    std::optional<SteadyCycle> cycle;  // over release_minus_send, aligned to a peak
    std::vector<double> inter_release;
    std::vector<double> offsets;
    double seconds = 0.0;
};

Golden run_golden(std::uint32_t period, double rho_u, double rho_l) {
    const auto t0 = std::chrono::steady_clock::now();
    PatternSpec spec;
    spec.period = period;
    spec.count = kGoldenCount;
    const auto events = gen_pattern(spec);
    const ScheduleTrace trace =
        replay(events, golden_config(rho_u, rho_l), {ProcessingOrder::kSequence, kGoldenWarmup});
    (void)compute_metrics(trace);
    Golden g;
    g.series = seq_series(trace);
    g.seconds = seconds_since(t0);

    const std::span<const double> tail(g.series.release_minus_send.data() + kGoldenWarmup,
                                       g.series.release_minus_send.size() - kGoldenWarmup);
    g.cycle = extract_cycle(tail, period, kCycleMatchTol, kGoldenWarmup);
    if (g.cycle) {
        const auto from = static_cast<std::ptrdiff_t>(kGoldenWarmup + g.cycle->start);
        const auto to = from + static_cast<std::ptrdiff_t>(g.cycle->period);
        g.inter_release.assign(g.series.inter_release.begin() + from,
                               g.series.inter_release.begin() + to);
        g.offsets.assign(g.series.offset_before.begin() + from,
                         g.series.offset_before.begin() + to);
    }
    return g;
}

double max_abs_diff_ms(std::span<const double> us, std::span<const double> ms) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        worst = std::max(worst, std::abs(us[i] / 1000.0 - ms[i]));
    }
    return worst;
}

Outcome criterion1() {
    Report r;
    const Golden g = run_golden(2, 1.0, 1.0);
    r.require(g.cycle && g.cycle->period == 2, "no settled 2-cycle");
    if (!g.cycle || g.cycle->period != 2) {
        return r.done();
    }
    const double dh = g.offsets[0] / 1000.0;
    const double dl = g.offsets[1] / 1000.0;
    const double into_peak = g.inter_release[0] / 1000.0;
    const double into_valley = g.inter_release[1] / 1000.0;
    r.note("D_H=" + fmt("%.3f", dh) + " D_L=" + fmt("%.3f", dl) + " ms, intervals " +
           fmt("%.2f", into_peak) + "/" + fmt("%.2f", into_valley) + " ms, " +
           fmt("%.3f", g.seconds) + " s");
    r.require(std::abs(dh - 93.8) <= kC1OffsetTolMs, "D_H off target");
    r.require(std::abs(dl - 94.8) <= kC1OffsetTolMs, "D_L off target");
    r.require(std::abs(into_peak - 21.9) <= kC1IntervalTolMs, "peak interval off target");
    r.require(std::abs(into_valley - 11.5) <= kC1IntervalTolMs, "valley interval off target");
    r.require(g.seconds < kC1RuntimeSec, "runtime over budget");
    return r.done();
}

Outcome criterion2() {
    Report r;
    const Golden g = run_golden(2, 0.5, 2.0);
    const auto& rms = g.series.release_minus_send;
    const auto [lo, hi] = std::minmax_element(rms.begin() + kGoldenWarmup, rms.end());
    r.note("T-S in [" + fmt("%.2f", *lo / 1000.0) + ", " + fmt("%.2f", *hi / 1000.0) + "] ms");
    r.require(*lo / 1000.0 >= kC2BandLoMs && *hi / 1000.0 <= kC2BandHiMs, "T-S outside band");
    r.require(g.cycle.has_value(), "no settled cycle");
    if (!g.cycle) {
        return r.done();
    }
    const std::array<double, 4> target = {16.3, 16.7, 16.5, 17.2};
    r.require(g.inter_release.size() == target.size(), "cycle length " +
                                                          std::to_string(g.inter_release.size()));
    if (g.inter_release.size() != target.size()) {
        return r.done();
    }
    double best = 1e9;
    std::vector<double> best_rot;
    for (std::size_t k = 0; k < target.size(); ++k) {
        std::vector<double> rot(target.size());
        for (std::size_t i = 0; i < target.size(); ++i) {
            rot[i] = g.inter_release[(i + k) % target.size()];
        }
        const double d = max_abs_diff_ms(rot, target);
        if (d < best) {
            best = d;
            best_rot = rot;
        }
    }
    r.note("cycle " + join_ms(best_rot) + " ms, max dev " + fmt("%.3f", best) + " ms");
    r.require(best <= kC2CycleTolMs, "interval cycle off target");
    return r.done();
}

Outcome criterion3() {
    Report r;
    const Golden g = run_golden(10, 1.0, 1.0);
    r.require(g.cycle && g.cycle->period == 10, "no settled 10-cycle");
    if (!g.cycle || g.cycle->period != 10) {
        return r.done();
    }
    const std::array<double, 10> target = {100.0, 81.5, 81.0, 80.6, 80.3, 79.9, 79.6, 79.2, 78.8, 78.3};
    const double dev = max_abs_diff_ms(g.cycle->values, target);
    r.note("T-S " + join_ms(g.cycle->values) + " ms, max dev " + fmt("%.3f", dev) + " ms");
    r.note("intervals " + join_ms(g.inter_release) + " ms");
    r.require(dev <= kC34CycleTolMs, "T-S cycle off target");
    const auto near = [&](double target) {
        return std::count_if(g.inter_release.begin(), g.inter_release.end(), [&](double v) {
            return std::abs(v / 1000.0 - target) <= kC3OutlierTolMs;
        });
    };
    const auto negatives = std::count_if(g.inter_release.begin(), g.inter_release.end(),
                                         [](double v) { return v < 0.0; });
    r.require(near(38.4) == 1, "expected exactly one ~38.4 ms interval");
    r.require(negatives == 1 && near(-1.8) == 1, "expected exactly one ~-1.8 ms interval");
    return r.done();
}

Outcome criterion4() {
    Report r;
    const Golden g = run_golden(10, 0.5, 2.0);
    r.require(g.cycle && g.cycle->period == 10, "no settled 10-cycle");
    if (!g.cycle || g.cycle->period != 10) {
        return r.done();
    }
    const std::array<double, 10> target = {100.0, 99.6, 99.3, 98.9, 98.6, 98.3, 98.0, 97.6, 97.3, 97.0};
    const double dev = max_abs_diff_ms(g.cycle->values, target);
    r.note("T-S " + join_ms(g.cycle->values) + " ms, max dev " + fmt("%.3f", dev) + " ms");
    r.note("intervals " + join_ms(g.inter_release) + " ms");
    r.require(dev <= kC34CycleTolMs, "T-S cycle off target");
    const auto peak = std::count_if(g.inter_release.begin(), g.inter_release.end(), [](double v) {
        return std::abs(v / 1000.0 - 19.7) <= kC4PeakIntervalTolMs;
    });
    const auto valley = std::count_if(g.inter_release.begin(), g.inter_release.end(), [](double v) {
        return v / 1000.0 >= kC4ValleyLoMs && v / 1000.0 <= kC4ValleyHiMs;
    });
    const auto& ir = g.series.inter_release;
    const auto negatives =
        std::count_if(ir.begin() + kGoldenWarmup + 1, ir.end(), [](double v) { return v < 0.0; });
    r.require(peak == 1, "expected one ~19.7 ms interval");
    r.require(valley == 9, "expected nine intervals in [16.2, 16.5] ms");
    r.require(negatives == 0, "negative steady-state interval");
    return r.done();
}

Outcome criterion5() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(kSeed ^ 5);
    const std::array<std::uint32_t, 4> periods = {2, 3, 5, 10};
    double worst = 0.0;
    for (int d = 0; d < kC5Draws; ++d) {
        const double gap = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        const std::uint32_t period = periods[std::uniform_int_distribution<int>(0, 3)(rng)];
        const double eps_hi = std::min(0.5, 1.0 / period);
        double eps = 0.0;
        while (!(eps > 0.0 && eps < eps_hi)) {
            eps = std::uniform_real_distribution<double>(0.0, eps_hi)(rng);
        }
        const double rho_u = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
        const double rho_l = std::uniform_real_distribution<double>(1.0, 2.0)(rng);

        const FixedPointResult fp = exponent_fixed_point({gap, eps, rho_u, rho_l, period});

        PatternSpec spec;
        spec.peak_delay = kC5Peak;
        spec.valley_delay = round_micros((1.0 - gap) * static_cast<double>(kC5Peak));
        spec.period = period;
        spec.count = kC5Events;
        SchedulerConfig c;
        c.variant = Variant::kAdc;
        c.adc.rho_u = rho_u;
        c.adc.rho_l = rho_l;
        const Gains gains = split_gains(kC5Lambda, eps);
        c.adc.lambda_u = gains.up;
        c.adc.lambda_l = gains.down;
        c.adc.clip_u = kC5Peak;
        c.adc.max_delay = 1000 * kMicrosPerSecond;
        c.adc.idle_timeout = 1000 * kMicrosPerSecond;
        c.adc.neutral_band = 0;
        const ScheduleTrace t =
            replay(gen_pattern(spec), c, {ProcessingOrder::kSequence, kC5Events / 2});

        double sum = 0.0;
        for (std::size_t i = kC5Events / 2; i < kC5Events; ++i) {
            sum += t.steps[i].offset_after;
        }
        const double mean = sum / static_cast<double>(kC5Events / 2) / static_cast<double>(kC5Peak);
        const double expected = 1.0 - fp.delta;
        const double rel = std::abs(mean - expected) / expected;
        worst = std::max(worst, rel);
        r.require(rel <= kC5RelTol, "draw " + std::to_string(d) + " rel err " + fmt("%.3g", rel));
    }
    const double secs = seconds_since(t0);
    r.note(std::to_string(kC5Draws) + " draws, worst rel err " + fmt("%.2e", worst) + ", " +
           fmt("%.2f", secs) + " s");
    r.require(secs < kC5RuntimeSec, "runtime over budget");
    return r.done();
}

Outcome criterion6() {
    Report r;
    std::mt19937_64 rng(kSeed ^ 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int exact = 0;
    double worst_exp = 0.0;
    for (int d = 0; d < kC6Draws; ++d) {
        const double g = 0.01 + 0.98 * unit(rng);
        const double eps = 0.001 + 0.998 * unit(rng);
        exact += linear_fixed_point(g, eps, 2).delta == eps * g ? 1 : 0;

        const std::uint32_t p = 2 + static_cast<std::uint32_t>(unit(rng) * 9.0);
        const double closed = linear_fixed_point(g, eps, p).delta;
        const double solved = exponent_fixed_point({g, eps, 1.0, 1.0, p}).delta;
        worst_exp = std::max(worst_exp, std::abs(solved - closed) / closed);
    }
    const double l10 = linear_fixed_point(0.3, 0.2, 10).delta;
    const double l10_ref = 0.54 / 2.6;
    const double l10_rel = std::abs(l10 - l10_ref) / l10_ref;
    r.note("P=2 exact " + std::to_string(exact) + "/" + std::to_string(kC6Draws) +
           ", P=10 value " + fmt("%.15f", l10) + " rel " + fmt("%.1e", l10_rel) +
           ", exponent vs closed form worst rel " + fmt("%.1e", worst_exp));
    r.require(exact == kC6Draws, "linear P=2 not exactly eps*g");
    r.require(l10_rel <= kC6LinearRelTol, "linear P=10 value off");
    r.require(worst_exp <= kC6ExponentRelTol, "exponent solver disagrees with closed form");
    return r.done();
}

Outcome criterion7() {
    Report r;
    std::mt19937_64 rng(kSeed ^ 7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::array<std::uint32_t, 5> periods = {2, 3, 4, 5, 10};
    int below = 0;
    double tightest = 0.0;
    for (int d = 0; d < kC7Draws; ++d) {
        const std::uint32_t p = periods[static_cast<std::size_t>(unit(rng) * periods.size())];
        ExponentProblem pr;
        pr.gap = 0.02 + 0.96 * unit(rng);
        pr.epsilon = (1e-3 + (1.0 - 2e-3) * unit(rng)) / p;
        pr.rho_u = 0.3 + 0.7 * unit(rng);
        pr.rho_l = 1.0 + unit(rng);
        pr.period = p;
        const FixedPointResult fp = exponent_fixed_point(pr);
        const double bound = fixed_point_bound(pr);
        below += (fp.bound_valid && fp.delta < bound) ? 1 : 0;
        tightest = std::max(tightest, fp.delta / bound);
    }
    int equal = 0;
    const int kHalfDraws = 100;
    for (int d = 0; d < kHalfDraws; ++d) {
        ExponentProblem pr;
        pr.gap = 0.02 + 0.96 * unit(rng);
        pr.epsilon = 0.5;
        pr.rho_u = 0.3 + 0.7 * unit(rng);
        pr.rho_l = 1.0 + unit(rng);
        pr.period = 2;
        equal += fixed_point_bound(pr) == std::pow(pr.gap, pr.rho_l / pr.rho_u) ? 1 : 0;
    }
    r.note(std::to_string(below) + "/" + std::to_string(kC7Draws) + " below bound (max ratio " +
           fmt("%.6f", tightest) + "), eps=1/2 equality " + std::to_string(equal) + "/" +
           std::to_string(kHalfDraws));
    r.require(below == kC7Draws, "solver root not below bound");
    r.require(equal == kHalfDraws, "eps=1/2 bound differs from g^(rho_l/rho_u)");
    return r.done();
}

struct Case {
    std::vector<RecoveryEvent> events;
    SchedulerConfig config;
    ReplayOptions options;
};

Case random_case(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const auto ms = [&](double lo, double hi) { return round_micros(uni(lo, hi) * 1000.0); };

    Case c;
    const std::array<Variant, 3> variants = {Variant::kAdc, Variant::kQadc, Variant::kQadcGuard};
    c.config.variant = variants[static_cast<std::size_t>(unit(rng) * 3.0)];
    AdcParams& p = c.config.adc;
    p.rho_u = uni(0.3, 1.0);
    p.rho_l = uni(1.0, 2.0);
    p.lambda_u = uni(0.1, 1.0);
    p.lambda_l = uni(0.01, 0.1);
    p.clip_u = ms(50, 200);
    p.max_delay = ms(30, 100);
    p.neutral_band = ms(0, 5);
    p.idle_timeout = ms(500, 2000);
    p.projection = unit(rng) < 0.5 ? ReleaseProjection::kBeforeUpdate : ReleaseProjection::kAfterUpdate;
    const bool sized = unit(rng) < 0.2;
    p.min_object_size = sized ? 200 : 0;
    c.config.quant_step = ms(8, 20);
    c.config.guard = ms(20, 200);
    c.options.order = unit(rng) < 0.5 ? ProcessingOrder::kRecovery : ProcessingOrder::kSequence;

    const std::size_t n = 20 + static_cast<std::size_t>(unit(rng) * 180.0);
    const Micros tau = ms(5, 40);
    const Micros base = ms(5, 150);
    const double jitter = uni(0, 120);
    Micros send = ms(0, 1000);
    for (std::size_t s = 0; s < n; ++s) {
        send += tau;
        if (unit(rng) < 0.02) {
            send += ms(1500, 3000);  // sender pause long enough for an idle re-anchor
        }
        if (unit(rng) < 0.03) {
            continue;  // lost object
        }
        Micros delay = base + ms(0, jitter);
        if (unit(rng) < 0.05) {
            delay += ms(50, 300);
        }
        RecoveryEvent e{s, send, send + delay, std::nullopt};
        if (sized) {
            e.size_bytes = static_cast<std::uint64_t>(uni(0, 2000));
        }
        c.events.push_back(e);
    }
    return c;
}

bool same_trace(const ScheduleTrace& a, const ScheduleTrace& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const StepRecord& x = a.steps[i];
        const StepRecord& y = b.steps[i];
        const ReleaseDecision& u = a.releases[i];
        const ReleaseDecision& v = b.releases[i];
        if (!(a.events[i] == b.events[i]) || u.seq != v.seq || u.candidate_ts != v.candidate_ts ||
            u.release_ts != v.release_ts || u.overtook_predecessor != v.overtook_predecessor ||
            x.offset_before != y.offset_before || x.offset_after != y.offset_after ||
            x.quantized != y.quantized || x.deviation != y.deviation ||
            x.reanchored != y.reanchored || x.bypassed != y.bypassed) {
            return false;
        }
    }
    return true;
}

Outcome criterion8() {
    Report r;
    std::mt19937_64 rng(kSeed ^ 8);
    std::map<std::string, long> checks;
    long events = 0;
    for (int k = 0; k < kC8Cases; ++k) {
        const Case c = random_case(rng);
        const std::string tag = "case " + std::to_string(k);
        const ScheduleTrace t = replay(c.events, c.config, c.options);
        const ScheduleTrace again = replay(c.events, c.config, c.options);
        r.require(same_trace(t, again), tag + ": replay not bit-identical");
        ++checks["determinism"];
        events += static_cast<long>(t.size());

        const AdcParams& p = c.config.adc;
        const bool quantized = c.config.variant != Variant::kAdc;
        const Micros slack = p.max_delay + p.neutral_band + (quantized ? c.config.quant_step : 0);

        std::map<std::uint64_t, std::size_t> by_seq;
        std::optional<Micros> last_a;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const RecoveryEvent& e = t.events[i];
            const ReleaseDecision& d = t.releases[i];
            const StepRecord& s = t.steps[i];
            by_seq[e.seq] = i;
            r.require(d.release_ts >= e.recovery_ts, tag + ": release before recovery");
            r.require(d.candidate_ts - e.recovery_ts <= slack, tag + ": clamp bound exceeded");
            checks["release>=recovery"] += 1;
            checks["clamp bound"] += 1;
            if (s.bypassed) {
                continue;
            }
            if (last_a && e.recovery_ts - *last_a >= p.idle_timeout) {
                r.require(s.reanchored && s.deviation == 0.0, tag + ": idle resume with X != 0");
                ++checks["idle re-anchor"];
            }
            last_a = e.recovery_ts;
        }

        if (quantized) {
            ReleaseScheduler sched(c.config);
            double prev_e = 0.0;
            bool first = true;
            for (std::size_t i = 0; i < t.size(); ++i) {
                const StepRecord s = sched.on_recovery(t.events[i]);
                if (s.bypassed) {
                    continue;
                }
                const double dd = sched.offset_state().offset;
                const double ee = sched.quantized_state().quantized_offset;
                const double gamma = static_cast<double>(c.config.quant_step);
                r.require(ee - dd >= 0.0 && ee - dd <= gamma, tag + ": D outside [E - gamma, E]");
                if (first || ee != prev_e) {
                    r.require(ee - dd < gamma, tag + ": re-anchor left E - D >= gamma");
                }
                ++checks["qadc band"];
                prev_e = ee;
                first = false;
            }
        }

        if (c.config.variant == Variant::kQadcGuard) {
            for (const auto& [seq, i] : by_seq) {
                const ReleaseDecision& d = t.releases[i];
                const Micros g = t.steps[i].guard;
                r.require(d.release_ts - d.candidate_ts >= 0 && d.release_ts - d.candidate_ts <= g,
                          tag + ": guard wait outside [0, G]");
                ++checks["guard wait"];
                if (t.steps[i].bypassed || seq == by_seq.begin()->first) {
                    continue;
                }
                const auto pred = by_seq.find(seq - 1);
                if (d.overtook_predecessor) {
                    r.require(pred == by_seq.end() ||
                                  t.releases[pred->second].release_ts >= d.candidate_ts + g,
                              tag + ": overtake without a G-late predecessor");
                    ++checks["overtake condition"];
                } else if (pred != by_seq.end()) {
                    r.require(t.releases[pred->second].release_ts <= d.release_ts,
                              tag + ": in-order release violated");
                }
            }
        }
    }
    std::string summary = std::to_string(kC8Cases) + " traces, " + std::to_string(events) + " objects;";
    for (const auto& [name, n] : checks) {
        summary += " " + name + "=" + std::to_string(n);
    }
    r.note(summary);
    r.require(checks["idle re-anchor"] > 0 && checks["overtake condition"] > 0,
              "invariant suite did not exercise idle re-anchor and overtakes");
    return r.done();
}

}  // namespace
}  // namespace relsched

int main() {
    using relsched::Outcome;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"linear length-2 golden", relsched::criterion1},
        {"exponent length-2 golden", relsched::criterion2},
        {"linear length-10 golden", relsched::criterion3},
        {"exponent length-10 golden", relsched::criterion4},
        {"analytic vs simulation equivalence", relsched::criterion5},
        {"closed-form checks", relsched::criterion6},
        {"fixed-point bound", relsched::criterion7},
        {"invariant suite", relsched::criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
