#include "relsched/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relsched {

Micros percentile_nearest_rank(std::span<const Micros> samples, double p) {
    if (samples.empty()) {
        throw DataError("percentile of an empty sample set");
    }
    if (!(p > 0.0 && p <= 100.0)) {
        throw ParamError("percentile must lie in (0, 100]");
    }
    std::vector<Micros> sorted(samples.begin(), samples.end());
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
    return sorted[rank - 1];
}

SlidingWindow::SlidingWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw ParamError("sliding window capacity must be > 0");
    }
}

void SlidingWindow::push(Micros sample) {
    if (samples_.size() == capacity_) {
        samples_.pop_front();
    }
    samples_.push_back(sample);
}

Micros SlidingWindow::percentile(double p) const {
    const std::vector<Micros> values = snapshot();
    return percentile_nearest_rank(values, p);
}

void validate(const AdaptInputs& in) {
    if (!(in.c_u >= 0.5 && in.c_u <= 2.0)) {
        throw ParamError("c_u must lie in [0.5, 2.0]");
    }
    if (!(in.c_delta > 0.0) || !std::isfinite(in.c_delta)) {
        throw ParamError("c_delta must be > 0");
    }
    if (in.window < 10) {
        throw ParamError("adaptation window must hold at least 10 samples");
    }
    if (!(in.reorder_percentile > 0.0 && in.reorder_percentile <= 100.0)) {
        throw ParamError("reorder_percentile must lie in (0, 100]");
    }
}

RecoveryStats::RecoveryStats(std::size_t window) : inter_recovery_(window), reorder_(window) {}

void RecoveryStats::observe(const RecoveryEvent& e) {
    if (last_recovery_) {
        inter_recovery_.push(e.recovery_ts - *last_recovery_);
    }
    last_recovery_ = e.recovery_ts;

    if (auto next = recovered_.find(e.seq + 1); next != recovered_.end()) {
        reorder_.push(std::abs(e.recovery_ts - next->second));
    }
    recovered_[e.seq] = e.recovery_ts;

    const std::uint64_t newest = recovered_.rbegin()->first;
    if (newest > kSeqHorizon) {
        recovered_.erase(recovered_.begin(), recovered_.lower_bound(newest - kSeqHorizon));
    }
}

Micros adapt_clip(const AdaptInputs& in) {
    if (in.rtt_smoothed <= 0) {
        throw ParamError("smoothed RTT must be > 0");
    }
    return round_micros(in.c_u * static_cast<double>(in.rtt_smoothed));
}

Micros adapt_clamp(const RecoveryStats& stats, double c_delta) {
    const SlidingWindow& w = stats.inter_recovery();
    if (w.empty()) {
        throw DataError("no inter-recovery samples to derive the clamp from");
    }
    const Micros spread = w.percentile(95.0) - w.percentile(50.0);
    return round_micros(c_delta * static_cast<double>(spread));
}

Micros adapt_guard(const RecoveryStats& stats, double p, Micros fallback) {
    const SlidingWindow& w = stats.reorder_magnitudes();
    if (w.empty()) {
        return fallback;
    }
    return w.percentile(p);
}

void validate(const AdaptConfig& config) {
    validate(config.inputs);
    const AdaptBias& b = config.bias;
    for (double f : {b.clip, b.clamp, b.guard}) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw ParamError("adaptation bias factors must be finite and > 0");
        }
    }
    if (config.clamp_floor <= 0) {
        throw ParamError("clamp floor must be > 0");
    }
    if (config.default_guard < 0) {
        throw ParamError("default guard must be >= 0");
    }
    if (config.update_interval == 0) {
        throw ParamError("adaptation update interval must be > 0");
    }
}

ParamAdapter::ParamAdapter(const AdaptConfig& config, Micros initial_clamp, Micros initial_guard)
    : config_(config),
      stats_(config.inputs.window),
      clip_(0),
      clamp_(initial_clamp),
      guard_(initial_guard) {
    validate(config_);
    clip_ = std::max<Micros>(1, round_micros(config_.bias.clip *
                                             static_cast<double>(adapt_clip(config_.inputs))));
}

void ParamAdapter::observe(const RecoveryEvent& event) {
    stats_.observe(event);
    if (++since_refresh_ >= config_.update_interval) {
        since_refresh_ = 0;
        refresh();
    }
}

void ParamAdapter::refresh() {
    if (!stats_.inter_recovery().empty()) {
        const Micros raw = adapt_clamp(stats_, config_.inputs.c_delta);
        const Micros biased = round_micros(config_.bias.clamp * static_cast<double>(raw));
        clamp_ = std::max(biased, config_.clamp_floor);
    }
    const Micros g = adapt_guard(stats_, config_.inputs.reorder_percentile, config_.default_guard);
    guard_ = round_micros(config_.bias.guard * static_cast<double>(g));
}

void ParamAdapter::apply(AdcParams& params) const {
    params.clip_u = clip_;
    params.max_delay = clamp_;
}

}  // namespace relsched
