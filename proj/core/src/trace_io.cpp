#include "relsched/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string_view>

namespace relsched {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        std::string_view field = line.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
            field.remove_suffix(1);
        }
        out.push_back(field);
        if (comma == std::string_view::npos) {
            return out;
        }
        pos = comma + 1;
    }
}

template <typename T>
T parse_field(std::string_view text, std::string_view column, std::size_t line) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw DataError("line " + std::to_string(line) + ": cannot parse " + std::string(column) +
                            " value '" + std::string(text) + "'",
                        line);
    }
    return value;
}

struct Header {
    std::vector<std::string> names;

    std::optional<std::size_t> find(std::string_view name) const {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - names.begin());
    }

    std::size_t require(std::string_view name) const {
        if (auto i = find(name)) {
            return *i;
        }
        throw DataError("line 1: missing required column '" + std::string(name) + "'", 1);
    }
};

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty input: expected a CSV header", 1);
    }
    Header h;
    for (std::string_view f : split_fields(line)) {
        h.names.emplace_back(f);
    }
    return h;
}

template <typename RowFn>
void for_each_row(std::istream& in, const Header& h, RowFn&& fn) {
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != h.names.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                                std::to_string(h.names.size()) + " fields, found " +
                                std::to_string(fields.size()),
                            line_no);
        }
        fn(fields, line_no);
    }
}

nlohmann::json pct_json(const std::optional<SeriesPercentiles>& p) {
    if (!p) {
        return nullptr;
    }
    return {{"p50", p->p50}, {"p90", p->p90}, {"p95", p->p95}, {"p99", p->p99}};
}

}  // namespace

std::vector<RecoveryEvent> read_events_csv(std::istream& in, const CsvReadOptions& options) {
    const Header h = read_header(in);
    const std::size_t seq_col = h.require("seq");
    const std::size_t send_col = h.require("sender_ts_us");
    const std::size_t recv_col = h.require(options.recovery_column);
    const std::optional<std::size_t> size_col = h.find("size_bytes");

    std::vector<RecoveryEvent> events;
    for_each_row(in, h, [&](const std::vector<std::string_view>& f, std::size_t line) {
        RecoveryEvent e;
        e.seq = parse_field<std::uint64_t>(f[seq_col], "seq", line);
        e.sender_ts = parse_field<Micros>(f[send_col], "sender_ts_us", line);
        e.recovery_ts = parse_field<Micros>(f[recv_col], options.recovery_column, line);
        if (e.recovery_ts < 0) {
            throw DataError("line " + std::to_string(line) + ": negative recovery timestamp", line);
        }
        if (size_col && !f[*size_col].empty()) {
            e.size_bytes = parse_field<std::uint64_t>(f[*size_col], "size_bytes", line);
        }
        events.push_back(e);
    });
    return events;
}

void write_schedule_csv(std::ostream& out, const ScheduleTrace& trace) {
    std::vector<std::size_t> idx(trace.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return trace.events[a].seq < trace.events[b].seq; });
    out << "seq,sender_ts_us,recovery_ts_us,release_ts_us,overtook\n";
    for (std::size_t i : idx) {
        const RecoveryEvent& e = trace.events[i];
        const ReleaseDecision& d = trace.releases[i];
        out << e.seq << ',' << e.sender_ts << ',' << e.recovery_ts << ',' << d.release_ts << ','
            << (d.overtook_predecessor ? 1 : 0) << '\n';
    }
}

std::vector<ScheduleRow> read_schedule_csv(std::istream& in) {
    const Header h = read_header(in);
    const std::size_t seq_col = h.require("seq");
    const std::size_t send_col = h.require("sender_ts_us");
    const std::size_t recv_col = h.require("recovery_ts_us");
    const std::size_t rel_col = h.require("release_ts_us");
    const std::size_t ovt_col = h.require("overtook");

    std::vector<ScheduleRow> rows;
    for_each_row(in, h, [&](const std::vector<std::string_view>& f, std::size_t line) {
        ScheduleRow r;
        r.seq = parse_field<std::uint64_t>(f[seq_col], "seq", line);
        r.sender_ts = parse_field<Micros>(f[send_col], "sender_ts_us", line);
        r.recovery_ts = parse_field<Micros>(f[recv_col], "recovery_ts_us", line);
        r.release_ts = parse_field<Micros>(f[rel_col], "release_ts_us", line);
        const int ovt = parse_field<int>(f[ovt_col], "overtook", line);
        if (ovt != 0 && ovt != 1) {
            throw DataError("line " + std::to_string(line) + ": overtook must be 0 or 1", line);
        }
        r.overtook = ovt == 1;
        rows.push_back(r);
    });
    return rows;
}

nlohmann::json to_json(const AdcParams& p) {
    return {
        {"rho_u", p.rho_u},
        {"rho_l", p.rho_l},
        {"lambda_u", p.lambda_u},
        {"lambda_l", p.lambda_l},
        {"clip_u_us", p.clip_u},
        {"max_delay_us", p.max_delay},
        {"neutral_band_us", p.neutral_band},
        {"idle_timeout_us", p.idle_timeout},
        {"min_object_size", p.min_object_size},
        {"projection", p.projection == ReleaseProjection::kBeforeUpdate ? "before-update" : "after-update"},
    };
}

nlohmann::json to_json(const SchedulerConfig& c) {
    nlohmann::json j = {
        {"variant", std::string(to_string(c.variant))},
        {"adc", to_json(c.adc)},
        {"gamma_us", c.quant_step},
        {"guard_us", c.guard},
        {"adapt", nullptr},
    };
    if (c.adapt) {
        const AdaptConfig& a = *c.adapt;
        j["adapt"] = {
            {"rtt_us", a.inputs.rtt_smoothed},
            {"c_u", a.inputs.c_u},
            {"c_delta", a.inputs.c_delta},
            {"window", a.inputs.window},
            {"reorder_percentile", a.inputs.reorder_percentile},
            {"bias_clip", a.bias.clip},
            {"bias_clamp", a.bias.clamp},
            {"bias_guard", a.bias.guard},
            {"clamp_floor_us", a.clamp_floor},
            {"default_guard_us", a.default_guard},
            {"update_interval", a.update_interval},
        };
    }
    return j;
}

nlohmann::json to_json(const ReplayOptions& o) {
    return {{"order", std::string(to_string(o.order))}, {"warmup", o.warmup}};
}

nlohmann::json to_json(const PatternSpec& s) {
    return {{"period", s.period},           {"peak_delay_us", s.peak_delay},
            {"valley_delay_us", s.valley_delay}, {"inter_send_us", s.inter_send},
            {"count", s.count}};
}

nlohmann::json to_json(const MetricsReport& r, bool include_series) {
    nlohmann::json j = {
        {"count", r.count},
        {"warmup_skipped", r.warmup_skipped},
        {"percentiles",
         {{"inter_release", pct_json(r.inter_release_pct)},
          {"inter_send", pct_json(r.inter_send_pct)},
          {"added_delay", pct_json(r.added_delay_pct)},
          {"cadence_error", pct_json(r.cadence_error_pct)},
          {"abs_cadence_error", pct_json(r.abs_cadence_error_pct)}}},
        {"inversion_count", r.inversion_count},
        {"excursion_events", r.excursion_events},
        {"excursion_threshold_us", r.excursion_threshold},
        {"nominal_interval_us", r.nominal_interval},
        {"overtakes", r.overtakes},
    };
    if (include_series) {
        j["inter_release_us"] = r.inter_release;
        j["inter_send_us"] = r.inter_send;
        j["added_delay_us"] = r.added_delay;
        j["cadence_error_us"] = r.cadence_error;
    }
    return j;
}

nlohmann::json to_json(const FixedPointResult& r) {
    nlohmann::json j = {
        {"delta", r.delta},
        {"equilibrium_offset", r.equilibrium_offset},
        {"bound", nullptr},
        {"bound_valid", r.bound_valid},
        {"iterations", r.iterations},
    };
    if (r.bound) {
        j["bound"] = *r.bound;
    }
    return j;
}

}  // namespace relsched
