#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "relsched/adc.hpp"

namespace relsched {

// Nearest-rank percentile, p in (0, 100]. Throws DataError on an empty sample set.
Micros percentile_nearest_rank(std::span<const Micros> samples, double p);

// Fixed-capacity FIFO of samples; evicts oldest first.
class SlidingWindow {
public:
    explicit SlidingWindow(std::size_t capacity);

    void push(Micros sample);
    std::size_t size() const { return samples_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return samples_.empty(); }
    std::vector<Micros> snapshot() const { return {samples_.begin(), samples_.end()}; }

    Micros percentile(double p) const;

private:
    std::size_t capacity_;
    std::deque<Micros> samples_;
};

struct AdaptInputs {
    Micros rtt_smoothed = 0;
    double c_u = 1.0;      // [0.5, 2.0]
    double c_delta = 2.0;  // > 0
    std::size_t window = 512;
    double reorder_percentile = 95.0;
};

void validate(const AdaptInputs& inputs);

// Sliding statistics over inter-recovery spacing and reordering, fed in recovery order.
//
// A reordering event is object s recovered after object s + 1; its magnitude is the
// recovery-time gap between the two.
class RecoveryStats {
public:
    explicit RecoveryStats(std::size_t window);

    void observe(const RecoveryEvent& event);

    const SlidingWindow& inter_recovery() const { return inter_recovery_; }
    const SlidingWindow& reorder_magnitudes() const { return reorder_; }

private:
    static constexpr std::uint64_t kSeqHorizon = 4096;

    SlidingWindow inter_recovery_;
    SlidingWindow reorder_;
    std::optional<Micros> last_recovery_;
    std::map<std::uint64_t, Micros> recovered_;  // recent seq -> recovery time
};

// U = c_U * RTT_sm. Throws ParamError for non-positive RTT.
Micros adapt_clip(const AdaptInputs& inputs);

// delta = c_delta * (q95 - q50) of inter-recovery spacing, unfloored.
// Throws DataError when the window is empty.
Micros adapt_clamp(const RecoveryStats& stats, double c_delta);

// G = p-th percentile of reorder magnitudes, or `fallback` when none were seen.
Micros adapt_guard(const RecoveryStats& stats, double p, Micros fallback);

// Application-level bias, one multiplicative factor per adapted parameter.
struct AdaptBias {
    double clip = 1.0;
    double clamp = 1.0;
    double guard = 1.0;
};

struct AdaptConfig {
    AdaptInputs inputs;
    AdaptBias bias;
    Micros clamp_floor = 5 * kMicrosPerMilli;
    Micros default_guard = 50 * kMicrosPerMilli;
    std::size_t update_interval = 256;  // objects between clamp/guard refreshes
};

void validate(const AdaptConfig& config);

// Drives (U, delta, G) from RTT and recovery statistics. Shaping parameters
// (rho, lambda) are never touched.
class ParamAdapter {
public:
    ParamAdapter(const AdaptConfig& config, Micros initial_clamp, Micros initial_guard);

    void observe(const RecoveryEvent& event);

    Micros clip() const { return clip_; }
    Micros clamp() const { return clamp_; }
    Micros guard() const { return guard_; }

    // Writes clip_u and max_delay; leaves every other field untouched.
    void apply(AdcParams& params) const;

private:
    void refresh();

    AdaptConfig config_;
    RecoveryStats stats_;
    Micros clip_;
    Micros clamp_;
    Micros guard_;
    std::size_t since_refresh_ = 0;
};

}  // namespace relsched
