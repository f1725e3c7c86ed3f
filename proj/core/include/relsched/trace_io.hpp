#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relsched/analytic.hpp"
#include "relsched/simkit.hpp"

namespace relsched {

constexpr int kReportSchema = 1;

struct CsvReadOptions {
    // Column read as A_n. Pointing this at "release_ts_us" re-ingests a schedule.
    std::string recovery_column = "recovery_ts_us";
};

// Input format: header `seq,sender_ts_us,recovery_ts_us` plus optional columns
// (`size_bytes` is honored, others ignored). Throws DataError with the 1-based line.
std::vector<RecoveryEvent> read_events_csv(std::istream& in, const CsvReadOptions& options = {});

// Output format: `seq,sender_ts_us,recovery_ts_us,release_ts_us,overtook`, one row per
// object in seq order, overtook as 0/1.
void write_schedule_csv(std::ostream& out, const ScheduleTrace& trace);

struct ScheduleRow {
    std::uint64_t seq = 0;
    Micros sender_ts = 0;
    Micros recovery_ts = 0;
    Micros release_ts = 0;
    bool overtook = false;

    friend bool operator==(const ScheduleRow&, const ScheduleRow&) = default;
};

std::vector<ScheduleRow> read_schedule_csv(std::istream& in);

nlohmann::json to_json(const AdcParams& params);
nlohmann::json to_json(const SchedulerConfig& config);
nlohmann::json to_json(const ReplayOptions& options);
nlohmann::json to_json(const PatternSpec& spec);
nlohmann::json to_json(const MetricsReport& report, bool include_series = true);
nlohmann::json to_json(const FixedPointResult& result);

}  // namespace relsched
