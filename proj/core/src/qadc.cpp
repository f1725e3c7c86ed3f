#include "relsched/qadc.hpp"

#include <algorithm>

namespace relsched {

QadcState qadc_init(const RecoveryEvent& event, Micros step) {
    if (step <= 0) {
        throw ParamError("quantization step gamma must be > 0");
    }
    QadcState state;
    state.adc = adc_init(event);
    state.step = static_cast<double>(step);
    state.quantized_offset = state.adc.offset + state.step / 2.0;
    return state;
}

double hysteresis_track(double offset, double quantized, double step) {
    if (offset > quantized || offset < quantized - step) {
        return offset + step / 2.0;
    }
    return quantized;
}

QadcUpdate qadc_update(QadcState& state, const RecoveryEvent& event, const AdcParams& p) {
    if (!(state.step > 0.0)) {
        throw ParamError("quantization step gamma must be > 0");
    }
    QadcUpdate out;
    if (!state.adc.initialized) {
        out.step = advance_offset(state.adc, event, p);
        state.quantized_offset = state.adc.offset + state.step / 2.0;
        out.quantized_before = out.quantized_after = state.quantized_offset;
        out.requantized = true;
        out.candidate_release = project_release(event, state.quantized_offset, p.neutral_band);
        return out;
    }

    out.step = advance_offset(state.adc, event, p);
    if (out.step.reanchored) {
        // An idle re-anchor of D re-anchors E with it.
        state.quantized_offset = out.step.offset_before + state.step / 2.0;
        out.requantized = true;
    }
    out.quantized_before = state.quantized_offset;

    const double tracked = hysteresis_track(state.adc.offset, state.quantized_offset, state.step);
    if (tracked != state.quantized_offset) {
        out.requantized = true;
    }
    state.quantized_offset = tracked;
    out.quantized_after = tracked;

    double offset = out.quantized_after;
    if (p.projection == ReleaseProjection::kBeforeUpdate) {
        const double cap = static_cast<double>(event.recovery_ts - event.sender_ts) +
                           static_cast<double>(p.max_delay) + state.step;
        offset = std::min(out.quantized_before, cap);
    }
    out.candidate_release = project_release(event, offset, p.neutral_band);
    return out;
}

}  // namespace relsched
