#include "relsched/adc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relsched {
namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw ParamError(std::string("invalid ADC parameter: ") + what);
    }
}

}  // namespace

void validate(const AdcParams& p) {
    require(std::isfinite(p.rho_u) && p.rho_u >= 0.0 && p.rho_u <= 1.0, "rho_u must lie in [0, 1]");
    require(std::isfinite(p.rho_l) && p.rho_l >= 1.0, "rho_l must be >= 1");
    require(std::isfinite(p.lambda_u) && p.lambda_u > 0.0, "lambda_u must be > 0");
    require(std::isfinite(p.lambda_l) && p.lambda_l > 0.0, "lambda_l must be > 0");
    require(p.clip_u > 0, "clip_u must be > 0");
    require(p.max_delay > 0, "max_delay must be > 0");
    require(p.neutral_band >= 0, "neutral_band must be >= 0");
    require(p.idle_timeout > 0, "idle_timeout must be > 0");
}

double shape_deviation(double x, const AdcParams& p) {
    const double clip = static_cast<double>(p.clip_u);
    if (x > 0.0) {
        return std::pow(std::min(x, clip) / clip, p.rho_u) * clip;
    }
    const double band = static_cast<double>(p.neutral_band);
    // With J = 0 the early branch needs strict x < 0; X = 0 falls through.
    if (x < 0.0 && x <= -band) {
        return -std::pow(std::min(std::abs(x + band), clip) / clip, p.rho_l) * clip;
    }
    return 0.0;
}

AdcState adc_init(const RecoveryEvent& event) {
    AdcState state;
    state.offset = static_cast<double>(event.recovery_ts - event.sender_ts);
    state.last_recovery_ts = event.recovery_ts;
    state.initialized = true;
    return state;
}

OffsetStep advance_offset(AdcState& state, const RecoveryEvent& event, const AdcParams& p) {
    if (event.recovery_ts < 0) {
        throw DataError("recovery timestamp precedes the receiver clock origin (seq " +
                        std::to_string(event.seq) + ")");
    }
    const double observed = static_cast<double>(event.recovery_ts - event.sender_ts);

    OffsetStep step;
    if (!state.initialized) {
        state = adc_init(event);
        step.offset_before = step.offset_after = state.offset;
        step.reanchored = true;
        return step;
    }

    if (event.recovery_ts - state.last_recovery_ts >= p.idle_timeout) {
        state.offset = observed;
        step.reanchored = true;
    }
    state.last_recovery_ts = event.recovery_ts;
    step.offset_before = state.offset;

    const double x = observed - state.offset;
    step.deviation = x;
    const double y = shape_deviation(x, p);
    if (x > 0.0) {
        state.offset += p.lambda_u * y;
    } else if (y != 0.0) {
        state.offset += p.lambda_l * y;
    }
    state.offset = std::min(state.offset, observed + static_cast<double>(p.max_delay));
    step.offset_after = state.offset;
    return step;
}

Micros project_release(const RecoveryEvent& event, double offset_us, Micros neutral_band) {
    const double projected = static_cast<double>(event.sender_ts) + offset_us +
                             static_cast<double>(neutral_band);
    return std::max(event.recovery_ts, round_micros(projected));
}

AdcUpdate adc_update(AdcState& state, const RecoveryEvent& event, const AdcParams& p) {
    AdcUpdate out;
    out.step = advance_offset(state, event, p);
    double offset = out.step.offset_after;
    if (p.projection == ReleaseProjection::kBeforeUpdate) {
        const double cap =
            static_cast<double>(event.recovery_ts - event.sender_ts) + static_cast<double>(p.max_delay);
        offset = std::min(out.step.offset_before, cap);
    }
    out.candidate_release = project_release(event, offset, p.neutral_band);
    return out;
}

}  // namespace relsched
