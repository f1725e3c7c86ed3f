#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "relsched/adapt.hpp"
#include "relsched/adc.hpp"
#include "relsched/qadc.hpp"

namespace relsched {

enum class Variant { kIdentity, kAdc, kQadc, kQadcGuard };

std::string_view to_string(Variant v);
// Accepts "identity", "adc", "qadc", "qadc-g". Throws ParamError otherwise.
Variant parse_variant(std::string_view name);

struct SchedulerConfig {
    Variant variant = Variant::kQadcGuard;
    AdcParams adc;
    Micros quant_step = kDefaultQuantStep;     // gamma
    Micros guard = 110 * kMicrosPerMilli;      // G
    std::optional<AdaptConfig> adapt;
};

void validate(const SchedulerConfig& config);

// Per-object output of the candidate stage (before any ordering guard).
struct StepRecord {
    std::uint64_t seq = 0;
    Micros candidate_ts = 0;
    double offset_before = 0.0;  // D in force when the object arrived
    double offset_after = 0.0;   // D after the update
    double quantized = 0.0;      // E used by the release rule (QADC only)
    double deviation = 0.0;      // X
    Micros guard = 0;            // G in effect for this object
    bool bypassed = false;
    bool reanchored = false;
};

// One stream's release scheduler. Feed objects in processing order; candidate
// release times come back immediately, the ordering guard runs downstream.
class ReleaseScheduler {
public:
    explicit ReleaseScheduler(const SchedulerConfig& config);

    StepRecord on_recovery(const RecoveryEvent& event);

    const SchedulerConfig& config() const { return config_; }
    // Parameters currently in force, including adapted U and delta.
    const AdcParams& params() const { return params_; }
    Micros guard() const { return guard_; }
    const AdcState& offset_state() const { return qadc_.adc; }
    const QadcState& quantized_state() const { return qadc_; }

private:
    SchedulerConfig config_;
    AdcParams params_;
    Micros guard_;
    QadcState qadc_;
    std::optional<ParamAdapter> adapter_;
};

}  // namespace relsched
