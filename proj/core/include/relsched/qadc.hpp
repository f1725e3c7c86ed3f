#pragma once

#include "relsched/adc.hpp"

namespace relsched {

// ADC offset plus a quantized offset E that follows D in steps of gamma.
// Invariant: E >= D and E - D <= gamma (strictly < gamma right after a re-anchor).
struct QadcState {
    AdcState adc;
    double quantized_offset = 0.0;  // E, microseconds
    double step = 0.0;              // gamma, microseconds
};

// Default quantization step: one 60 fps frame interval.
constexpr Micros kDefaultQuantStep = 14 * kMicrosPerMilli;

QadcState qadc_init(const RecoveryEvent& event, Micros step);

// Midpoint hysteresis: hold E while offset lies in [E - step, E], otherwise
// re-anchor to offset + step / 2. Returns the new E.
double hysteresis_track(double offset, double quantized, double step);

struct QadcUpdate {
    Micros candidate_release = 0;
    OffsetStep step;
    double quantized_before = 0.0;
    double quantized_after = 0.0;
    bool requantized = false;
};

// Throws ParamError if state.step is not positive.
QadcUpdate qadc_update(QadcState& state, const RecoveryEvent& event, const AdcParams& params);

}  // namespace relsched
