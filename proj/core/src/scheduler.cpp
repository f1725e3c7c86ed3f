#include "relsched/scheduler.hpp"

#include <string>

namespace relsched {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::kIdentity:
            return "identity";
        case Variant::kAdc:
            return "adc";
        case Variant::kQadc:
            return "qadc";
        case Variant::kQadcGuard:
            return "qadc-g";
    }
    return "unknown";
}

Variant parse_variant(std::string_view name) {
    for (Variant v : {Variant::kIdentity, Variant::kAdc, Variant::kQadc, Variant::kQadcGuard}) {
        if (name == to_string(v)) {
            return v;
        }
    }
    throw ParamError("unknown scheduler variant '" + std::string(name) + "'");
}

void validate(const SchedulerConfig& c) {
    validate(c.adc);
    if (c.quant_step <= 0) {
        throw ParamError("quantization step gamma must be > 0");
    }
    if (c.guard < 0) {
        throw ParamError("guard window must be >= 0");
    }
    if (c.adapt) {
        validate(*c.adapt);
    }
}

ReleaseScheduler::ReleaseScheduler(const SchedulerConfig& config)
    : config_(config), params_(config.adc), guard_(config.guard) {
    validate(config_);
    qadc_.step = static_cast<double>(config_.quant_step);
    if (config_.adapt) {
        adapter_.emplace(*config_.adapt, params_.max_delay, guard_);
        adapter_->apply(params_);
    }
}

StepRecord ReleaseScheduler::on_recovery(const RecoveryEvent& event) {
    StepRecord rec;
    rec.seq = event.seq;
    rec.guard = guard_;

    if (event.recovery_ts < 0) {
        throw DataError("recovery timestamp precedes the receiver clock origin (seq " +
                        std::to_string(event.seq) + ")");
    }

    const bool bypass = config_.variant == Variant::kIdentity ||
                        (event.size_bytes && bypass_small(*event.size_bytes, params_));
    if (bypass) {
        rec.candidate_ts = event.recovery_ts;
        rec.bypassed = true;
        rec.offset_before = rec.offset_after = qadc_.adc.offset;
        rec.quantized = qadc_.quantized_offset;
    } else if (config_.variant == Variant::kAdc) {
        const AdcUpdate u = adc_update(qadc_.adc, event, params_);
        rec.candidate_ts = u.candidate_release;
        rec.offset_before = u.step.offset_before;
        rec.offset_after = u.step.offset_after;
        rec.deviation = u.step.deviation;
        rec.reanchored = u.step.reanchored;
    } else {
        const QadcUpdate u = qadc_update(qadc_, event, params_);
        rec.candidate_ts = u.candidate_release;
        rec.offset_before = u.step.offset_before;
        rec.offset_after = u.step.offset_after;
        rec.deviation = u.step.deviation;
        rec.reanchored = u.step.reanchored;
        rec.quantized = params_.projection == ReleaseProjection::kBeforeUpdate ? u.quantized_before
                                                                                : u.quantized_after;
    }

    if (adapter_ && !bypass) {
        adapter_->observe(event);
        adapter_->apply(params_);
        guard_ = adapter_->guard();
    }
    return rec;
}

}  // namespace relsched
