#pragma once

#include <cstdint>

#include "relsched/types.hpp"

namespace relsched {

// Which offset value the release rule reads for the object that drives an update.
//
// kBeforeUpdate: T_n = max(A_n, S_n + D + J) with D as it stood when object n was
//   recovered (after any idle re-anchor, before the shaped step). The projection is
//   capped at A_n - S_n + max_delay so the added wait stays bounded.
// kAfterUpdate: T_n uses D after the shaped step and clamp, in pseudocode line order.
//
// Both modes evolve D identically.
enum class ReleaseProjection { kBeforeUpdate, kAfterUpdate };

struct AdcParams {
    double rho_u = 0.5;     // late-side exponent, in [0, 1]
    double rho_l = 1.5;     // early-side exponent, >= 1
    double lambda_u = 0.55;
    double lambda_l = 0.055;
    Micros clip_u = 125 * kMicrosPerMilli;        // U
    Micros max_delay = 65 * kMicrosPerMilli;      // delta
    Micros neutral_band = 2500;                   // J
    Micros idle_timeout = 1250 * kMicrosPerMilli;  // T_idle
    std::uint64_t min_object_size = 0;            // bypass threshold in bytes, 0 disables
    ReleaseProjection projection = ReleaseProjection::kBeforeUpdate;
};

// Throws ParamError naming the first offending field.
void validate(const AdcParams& params);

struct AdcState {
    double offset = 0.0;  // D, microseconds; a clock mapping, not a physical delay
    Micros last_recovery_ts = 0;
    bool initialized = false;
};

// Shaped adjustment Y for a deviation X (microseconds). Zero inside (-J, 0].
double shape_deviation(double deviation_us, const AdcParams& params);

AdcState adc_init(const RecoveryEvent& event);

// Result of advancing the offset by one recovered object.
struct OffsetStep {
    double offset_before = 0.0;  // D after any idle re-anchor, before the shaped step
    double offset_after = 0.0;   // D after the shaped step and clamp
    double deviation = 0.0;      // X
    bool reanchored = false;     // idle re-anchor fired (or this was the first event)
};

// Steps (1)-(5) of the offset update: idle re-anchor, deviation, asymmetric shaped
// step, clamp. Initializes the state on the first event. Throws DataError for a
// negative recovery timestamp.
OffsetStep advance_offset(AdcState& state, const RecoveryEvent& event, const AdcParams& params);

struct AdcUpdate {
    Micros candidate_release = 0;  // T_n
    OffsetStep step;
};

AdcUpdate adc_update(AdcState& state, const RecoveryEvent& event, const AdcParams& params);

// max(A_n, round(S_n + offset + J)).
Micros project_release(const RecoveryEvent& event, double offset_us, Micros neutral_band);

// True when the object should skip smoothing: released at A_n without touching the state.
inline bool bypass_small(std::uint64_t object_size, const AdcParams& params) {
    return object_size < params.min_object_size;
}

}  // namespace relsched
