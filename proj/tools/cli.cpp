#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relsched/simkit.hpp"
#include "relsched/trace_io.hpp"

namespace relsched::cli {
namespace {

using nlohmann::json;
using KeyValues = std::map<std::string, std::string>;

constexpr std::size_t kSimulateWarmup = 500;
constexpr Micros kDefaultAdaptRtt = 125 * kMicrosPerMilli;
constexpr double kCycleTolerance = 2.0;  // microseconds

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return parts;
}

double parse_number(std::string_view text, const std::string& what) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw UsageError("invalid number '" + std::string(text) + "' for " + what, what);
    }
    return v;
}

std::uint64_t parse_count(std::string_view text, const std::string& what) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw UsageError("invalid count '" + std::string(text) + "' for " + what, what);
    }
    return v;
}

bool parse_bool(std::string_view text, const std::string& what) {
    if (text == "true" || text == "1" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "off") {
        return false;
    }
    throw UsageError("invalid boolean '" + std::string(text) + "' for " + what, what);
}

Micros parse_duration_for(std::string_view text, const std::string& what) {
    try {
        return parse_duration(text);
    } catch (const UsageError& e) {
        throw UsageError(std::string(e.what()) + " for " + what, what);
    }
}

// Scheduler and run settings assembled from flat keys.
struct Settings {
    SchedulerConfig scheduler;
    AdaptConfig adapt;
    bool adapt_enabled = false;
    ReplayOptions replay;
    std::optional<Micros> threshold;
};

using Setter = std::function<void(Settings&, std::string_view, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& key_table() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"variant",
         [](Settings& s, std::string_view v, const std::string&) {
             s.scheduler.variant = parse_variant(v);
         }},
        {"rho_u", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.rho_u = parse_number(v, k);
         }},
        {"rho_l", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.rho_l = parse_number(v, k);
         }},
        {"lambda_u", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.lambda_u = parse_number(v, k);
         }},
        {"lambda_l", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.lambda_l = parse_number(v, k);
         }},
        // lambda and epsilon are resolved together in apply_keys.
        {"lambda", nullptr},
        {"epsilon", nullptr},
        {"clip_u", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.clip_u = parse_duration_for(v, k);
         }},
        {"max_delay", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.max_delay = parse_duration_for(v, k);
         }},
        {"neutral_band", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.neutral_band = parse_duration_for(v, k);
         }},
        {"idle_timeout", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.idle_timeout = parse_duration_for(v, k);
         }},
        {"min_object_size", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.adc.min_object_size = parse_count(v, k);
         }},
        {"projection",
         [](Settings& s, std::string_view v, const std::string& k) {
             if (v == "before-update") {
                 s.scheduler.adc.projection = ReleaseProjection::kBeforeUpdate;
             } else if (v == "after-update") {
                 s.scheduler.adc.projection = ReleaseProjection::kAfterUpdate;
             } else {
                 throw UsageError("projection must be before-update or after-update", k);
             }
         }},
        {"gamma", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.quant_step = parse_duration_for(v, k);
         }},
        {"guard", [](Settings& s, std::string_view v, const std::string& k) {
             s.scheduler.guard = parse_duration_for(v, k);
         }},
        {"order",
         [](Settings& s, std::string_view v, const std::string&) {
             s.replay.order = parse_order(v);
         }},
        {"warmup", [](Settings& s, std::string_view v, const std::string& k) {
             s.replay.warmup = parse_count(v, k);
         }},
        {"threshold", [](Settings& s, std::string_view v, const std::string& k) {
             s.threshold = parse_duration_for(v, k);
         }},
        {"adapt", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt_enabled = parse_bool(v, k);
         }},
        {"adapt.rtt", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.inputs.rtt_smoothed = parse_duration_for(v, k);
         }},
        {"adapt.c_u", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.inputs.c_u = parse_number(v, k);
         }},
        {"adapt.c_delta", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.inputs.c_delta = parse_number(v, k);
         }},
        {"adapt.window", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.inputs.window = parse_count(v, k);
         }},
        {"adapt.reorder_percentile", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.inputs.reorder_percentile = parse_number(v, k);
         }},
        {"adapt.bias_clip", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.bias.clip = parse_number(v, k);
         }},
        {"adapt.bias_clamp", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.bias.clamp = parse_number(v, k);
         }},
        {"adapt.bias_guard", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.bias.guard = parse_number(v, k);
         }},
        {"adapt.clamp_floor", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.clamp_floor = parse_duration_for(v, k);
         }},
        {"adapt.default_guard", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.default_guard = parse_duration_for(v, k);
         }},
        {"adapt.update_interval", [](Settings& s, std::string_view v, const std::string& k) {
             s.adapt.update_interval = parse_count(v, k);
         }},
    };
    return table;
}

void check_known(const std::string& key) {
    const auto& keys = flat_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw UsageError("unknown parameter key '" + key + "'", key);
    }
}

Settings apply_keys(Settings base, const KeyValues& values) {
    for (const auto& [key, _] : values) {
        check_known(key);
    }
    const bool combined = values.count("lambda") || values.count("epsilon");
    const bool raw = values.count("lambda_u") || values.count("lambda_l");
    if (combined && raw) {
        throw UsageError("lambda/epsilon and lambda_u/lambda_l are mutually exclusive",
                         values.count("lambda") ? "lambda" : "epsilon");
    }
    bool touches_adapt = false;
    for (const auto& [key, setter] : key_table()) {
        auto it = values.find(key);
        if (it == values.end() || !setter) {
            continue;
        }
        touches_adapt = touches_adapt || key.rfind("adapt.", 0) == 0;
        try {
            setter(base, it->second, key);
        } catch (const ParamError& e) {
            throw UsageError(std::string(e.what()), key);
        }
    }
    if (combined) {
        AdcParams& adc = base.scheduler.adc;
        const GainPair current = combine_gains(adc.lambda_u, adc.lambda_l);
        const double lambda = values.count("lambda")
                                  ? parse_number(values.at("lambda"), "lambda")
                                  : current.lambda;
        const double epsilon = values.count("epsilon")
                                   ? parse_number(values.at("epsilon"), "epsilon")
                                   : current.epsilon;
        const Gains g = split_gains(lambda, epsilon);
        adc.lambda_u = g.up;
        adc.lambda_l = g.down;
    }
    if (touches_adapt && !base.adapt_enabled) {
        throw UsageError("adaptation keys require --adapt", "adapt");
    }
    base.scheduler.adapt.reset();
    if (base.adapt_enabled) {
        base.scheduler.adapt = base.adapt;
    }
    validate(base.scheduler);
    return base;
}

Settings default_settings(ProcessingOrder order, std::size_t warmup) {
    Settings s;
    s.adapt.inputs.rtt_smoothed = kDefaultAdaptRtt;
    s.replay.order = order;
    s.replay.warmup = warmup;
    return s;
}

json config_json(const Settings& s) {
    return {
        {"scheduler", to_json(s.scheduler)},
        {"replay", to_json(s.replay)},
        {"threshold_us", s.threshold ? json(*s.threshold) : json(nullptr)},
    };
}

// Deferred outputs, committed only after every computation succeeded.
class OutputSet {
public:
    explicit OutputSet(std::ostream& out) : out_(out) {}

    void add(const std::optional<std::string>& path, std::string content) {
        if (!path) {
            stdout_ += content;
            return;
        }
        for (const auto& f : files_) {
            if (f.first == *path) {
                throw UsageError("output path '" + *path + "' given twice");
            }
        }
        files_.emplace_back(*path, std::move(content));
    }

    void commit() {
        namespace fs = std::filesystem;
        std::vector<fs::path> temps;
        auto discard = [&temps] {
            std::error_code ec;
            for (const auto& t : temps) {
                fs::remove(t, ec);
            }
        };
        for (const auto& [path, content] : files_) {
            fs::path tmp = fs::path(path);
            tmp += ".relsched-tmp";
            temps.push_back(tmp);
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f << content;
            f.close();
            if (!f) {
                discard();
                throw IoError("cannot write output '" + path + "'");
            }
        }
        for (std::size_t i = 0; i < files_.size(); ++i) {
            std::error_code ec;
            fs::rename(temps[i], files_[i].first, ec);
            if (ec) {
                discard();
                throw IoError("cannot write output '" + files_[i].first + "': " + ec.message());
            }
        }
        out_ << stdout_;
        out_.flush();
    }

private:
    std::ostream& out_;
    std::vector<std::pair<std::string, std::string>> files_;
    std::string stdout_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string schedule_csv(const ScheduleTrace& trace) {
    std::ostringstream s;
    write_schedule_csv(s, trace);
    return s.str();
}

ScheduleTrace run_schedule(const std::vector<RecoveryEvent>& events, const Settings& s) {
    if (events.empty()) {
        ScheduleTrace t;
        t.params_used = s.scheduler;
        t.options = s.replay;
        return t;
    }
    return replay(events, s.scheduler, s.replay);
}

json metrics_json(const ScheduleTrace& trace, const Settings& s, bool series) {
    if (trace.empty()) {
        return nullptr;
    }
    return to_json(compute_metrics(trace, s.threshold), series);
}

json steady_state_json(const ScheduleTrace& trace, std::uint32_t period, std::size_t warmup) {
    if (trace.empty()) {
        return nullptr;
    }
    const SeqSeries s = seq_series(trace);
    if (s.seq.size() <= warmup) {
        return nullptr;
    }
    const std::span<const double> tail(s.release_minus_send.data() + warmup,
                                       s.release_minus_send.size() - warmup);
    const auto cycle = extract_cycle(tail, period, kCycleTolerance, warmup);
    if (!cycle) {
        return nullptr;
    }
    const auto from = static_cast<std::ptrdiff_t>(warmup + cycle->start);
    const auto to = from + static_cast<std::ptrdiff_t>(cycle->period);
    return {
        {"period", cycle->period},
        {"start_seq", s.seq[static_cast<std::size_t>(from)]},
        {"release_minus_send_us", cycle->values},
        {"inter_release_us",
         std::vector<double>(s.inter_release.begin() + from, s.inter_release.begin() + to)},
        {"offset_us",
         std::vector<double>(s.offset_before.begin() + from, s.offset_before.begin() + to)},
    };
}

std::vector<RecoveryEvent> load_events(const std::string& path, const std::string& column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open input '" + path + "'");
    }
    CsvReadOptions opts;
    opts.recovery_column = column;
    return read_events_csv(in, opts);
}

PatternSpec checked_pattern(const std::string& text) {
    PatternSpec spec = parse_pattern(text);
    try {
        validate(spec, /*allow_flat=*/true);
    } catch (const ParamError& e) {
        throw UsageError(e.what(), "pattern");
    }
    return spec;
}

// Flag values bound to flat keys, collected by CLI11 callbacks.
struct Collected {
    KeyValues flags;
    std::vector<std::string> sets;

    void put(const std::string& key, const std::string& value) {
        if (!flags.emplace(key, value).second) {
            throw UsageError("parameter '" + key + "' given twice", key);
        }
    }

    KeyValues merged() const {
        KeyValues all = flags;
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw UsageError("--set expects key=value, got '" + kv + "'");
            }
            const std::string key = trim(std::string_view(kv).substr(0, eq));
            check_known(key);
            if (!all.emplace(key, trim(std::string_view(kv).substr(eq + 1))).second) {
                throw UsageError("parameter '" + key + "' given twice", key);
            }
        }
        return all;
    }
};

struct Cli {
    Collected keys;
    std::string pattern;
    std::string input;
    std::string recovery_column = "recovery_ts_us";
    std::optional<std::string> schedule_out;
    std::optional<std::string> metrics_out;
    std::optional<std::string> baseline_out;
    bool compare_raw = false;
    bool no_series = false;
    std::vector<std::string> sweeps;
    unsigned jobs = 0;
    std::string format = "json";

    // analyze
    bool linear = false;
    double g = 0.0;
    double epsilon = 0.0;
    double rho_u = ExponentProblem{}.rho_u;
    double rho_l = ExponentProblem{}.rho_l;
    std::uint32_t period = 2;
    double tol = kDefaultRootTolerance;
    double peak = 1.0;
};

void add_key_option(CLI::App* app, Cli& cli, const std::string& flag, const std::string& key,
                    const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&cli, key](const std::string& v) { cli.keys.put(key, v); }, help);
}

CLI::Option* add_pair_option(CLI::App* app, Cli& cli, const std::string& flag, const std::string& first,
                     const std::string& second, const std::string& help) {
    return app->add_option_function<std::string>(
        flag,
        [&cli, flag, first, second](const std::string& v) {
            const auto parts = split(v, ',');
            if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
                throw UsageError(flag + " expects " + first + "," + second);
            }
            cli.keys.put(first, parts[0]);
            cli.keys.put(second, parts[1]);
        },
        help);
}

void add_scheduler_options(CLI::App* app, Cli& cli) {
    add_key_option(app, cli, "--variant", "variant", "identity, adc, qadc or qadc-g");
    auto* rho_u = app->add_option_function<std::string>(
        "--rho-u", [&cli](const std::string& v) { cli.keys.put("rho_u", v); },
        "late-side exponent");
    auto* rho_l = app->add_option_function<std::string>(
        "--rho-l", [&cli](const std::string& v) { cli.keys.put("rho_l", v); },
        "early-side exponent");
    auto* linear = app->add_flag_callback(
        "--linear",
        [&cli] {
            cli.keys.put("rho_u", "1");
            cli.keys.put("rho_l", "1");
        },
        "linear shaping (rho_u = rho_l = 1)");
    linear->excludes(rho_u)->excludes(rho_l);

    std::vector<CLI::Option*> single;
    for (const auto& [flag, key] : std::vector<std::pair<std::string, std::string>>{
             {"--lambda", "lambda"},
             {"--epsilon", "epsilon"},
             {"--lambda-u", "lambda_u"},
             {"--lambda-l", "lambda_l"}}) {
        single.push_back(app->add_option_function<std::string>(
            flag, [&cli, key = key](const std::string& v) { cli.keys.put(key, v); },
            "gain " + key));
    }
    auto* gains = add_pair_option(app, cli, "--gains", "lambda", "epsilon", "lambda,epsilon");
    auto* gains_raw =
        add_pair_option(app, cli, "--gains-raw", "lambda_u", "lambda_l", "lambda_u,lambda_l");
    gains->excludes(gains_raw);
    for (auto* o : single) {
        gains->excludes(o);
        gains_raw->excludes(o);
    }

    add_key_option(app, cli, "--clip", "clip_u", "clipping range U (duration)");
    add_key_option(app, cli, "--max-delay", "max_delay", "clamp delta (duration)");
    add_key_option(app, cli, "--neutral-band", "neutral_band", "neutral band J (duration)");
    add_key_option(app, cli, "--idle-timeout", "idle_timeout", "idle re-anchor timeout (duration)");
    add_key_option(app, cli, "--min-object-size", "min_object_size", "bypass threshold in bytes");
    add_key_option(app, cli, "--gamma", "gamma", "quantization step (duration)");
    add_key_option(app, cli, "--guard", "guard", "in-order guard window G (duration)");
    add_key_option(app, cli, "--projection", "projection", "before-update or after-update");
    add_key_option(app, cli, "--order", "order", "recovery or sequence");
    add_key_option(app, cli, "--warmup", "warmup", "objects excluded from metrics");
    add_key_option(app, cli, "--threshold", "threshold", "excursion threshold (duration)");
    app->add_flag_callback("--adapt", [&cli] { cli.keys.put("adapt", "true"); },
                           "adapt U, delta and G online");
    add_key_option(app, cli, "--rtt", "adapt.rtt", "smoothed RTT for adaptation (duration)");
    add_key_option(app, cli, "--c-u", "adapt.c_u", "U = c_u * RTT");
    add_key_option(app, cli, "--c-delta", "adapt.c_delta", "delta = c_delta * (q95 - q50)");
    add_key_option(app, cli, "--adapt-window", "adapt.window", "statistics window (samples)");
    add_key_option(app, cli, "--reorder-percentile", "adapt.reorder_percentile",
                   "percentile of reorder magnitudes used for G");
    add_key_option(app, cli, "--adapt-interval", "adapt.update_interval",
                   "objects between refreshes");
    app->add_option("--set", cli.keys.sets, "flat key=value override (repeatable)");
    app->add_flag("--no-series", cli.no_series, "omit per-object series from metrics");
}

void add_output_options(CLI::App* app, Cli& cli) {
    app->add_option("--schedule-out", cli.schedule_out, "schedule CSV path");
    app->add_option("--metrics-out", cli.metrics_out, "metrics JSON path (default stdout)");
    app->add_option("--baseline-out", cli.baseline_out, "identity-baseline schedule CSV path");
    app->add_flag("--compare-raw", cli.compare_raw, "also report the identity baseline");
}

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

std::vector<SweepAxis> parse_sweeps(const std::vector<std::string>& specs, const KeyValues& base) {
    std::vector<SweepAxis> axes;
    for (const std::string& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw UsageError("--sweep expects key=v1,v2,..., got '" + spec + "'");
        }
        SweepAxis axis{trim(std::string_view(spec).substr(0, eq)),
                       split(std::string_view(spec).substr(eq + 1), ',')};
        check_known(axis.key);
        if (base.count(axis.key)) {
            throw UsageError("parameter '" + axis.key + "' is both fixed and swept", axis.key);
        }
        for (const SweepAxis& other : axes) {
            if (other.key == axis.key) {
                throw UsageError("parameter '" + axis.key + "' swept twice", axis.key);
            }
        }
        if (std::any_of(axis.values.begin(), axis.values.end(),
                        [](const std::string& v) { return v.empty(); })) {
            throw UsageError("empty sweep value for '" + axis.key + "'", axis.key);
        }
        axes.push_back(std::move(axis));
    }
    return axes;
}

// Cartesian product in declaration order, last axis varying fastest.
std::vector<KeyValues> sweep_points(const std::vector<SweepAxis>& axes) {
    std::vector<KeyValues> points{KeyValues{}};
    for (const SweepAxis& axis : axes) {
        std::vector<KeyValues> next;
        for (const KeyValues& p : points) {
            for (const std::string& v : axis.values) {
                KeyValues q = p;
                q[axis.key] = v;
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void simulate_sweep(const Cli& cli, const PatternSpec& spec, const KeyValues& base,
                    OutputSet& outputs) {
    if (cli.schedule_out || cli.baseline_out) {
        throw UsageError("--sweep writes metrics only; drop --schedule-out/--baseline-out");
    }
    const std::vector<SweepAxis> axes = parse_sweeps(cli.sweeps, base);
    const std::vector<KeyValues> points = sweep_points(axes);
    const Settings defaults = default_settings(ProcessingOrder::kSequence, kSimulateWarmup);

    std::vector<Settings> settings;
    for (const KeyValues& p : points) {
        KeyValues all = base;
        all.insert(p.begin(), p.end());
        settings.push_back(apply_keys(defaults, all));
    }

    const std::vector<RecoveryEvent> events = gen_pattern(spec);
    std::vector<json> runs(points.size());
    const unsigned jobs = cli.jobs ? cli.jobs : std::max(1u, std::thread::hardware_concurrency());
    parallel_for(points.size(), jobs, [&](std::size_t i) {
        const Settings& s = settings[i];
        const ScheduleTrace trace = run_schedule(events, s);
        json run = {
            {"point", points[i]},
            {"config", config_json(s)},
            {"metrics", metrics_json(trace, s, false)},
            {"steady_state", steady_state_json(trace, spec.period, s.replay.warmup)},
        };
        if (cli.compare_raw) {
            const ScheduleTrace raw = events.empty() ? run_schedule(events, s)
                                                     : identity_schedule(events, s.replay);
            run["baseline"] = {{"metrics", metrics_json(raw, s, false)}};
        }
        runs[i] = std::move(run);
    });

    json axes_json = json::array();
    for (const SweepAxis& a : axes) {
        axes_json.push_back({{"key", a.key}, {"values", a.values}});
    }
    const json report = {
        {"schema", kReportSchema},
        {"command", "simulate"},
        {"config", {{"pattern", to_json(spec)}, {"fixed", base}, {"sweep", axes_json}}},
        {"runs", runs},
    };
    outputs.add(cli.metrics_out, dump(report));
}

json baseline_block(const std::vector<RecoveryEvent>& events, const Settings& s, const Cli& cli,
                    OutputSet& outputs) {
    ScheduleTrace raw = events.empty() ? run_schedule(events, s) : identity_schedule(events, s.replay);
    if (cli.baseline_out) {
        outputs.add(cli.baseline_out, schedule_csv(raw));
    }
    return {{"metrics", metrics_json(raw, s, !cli.no_series)}};
}

void cmd_simulate(const Cli& cli, OutputSet& outputs) {
    const PatternSpec spec = checked_pattern(cli.pattern);
    const KeyValues keys = cli.keys.merged();
    if (!cli.sweeps.empty()) {
        simulate_sweep(cli, spec, keys, outputs);
        return;
    }
    if (cli.baseline_out && !cli.compare_raw) {
        throw UsageError("--baseline-out requires --compare-raw");
    }
    const Settings s = apply_keys(default_settings(ProcessingOrder::kSequence, kSimulateWarmup), keys);
    const std::vector<RecoveryEvent> events = gen_pattern(spec);
    const ScheduleTrace trace = run_schedule(events, s);

    json config = config_json(s);
    config["pattern"] = to_json(spec);
    json report = {
        {"schema", kReportSchema},
        {"command", "simulate"},
        {"config", config},
        {"metrics", metrics_json(trace, s, !cli.no_series)},
        {"steady_state", steady_state_json(trace, spec.period, s.replay.warmup)},
    };
    if (cli.compare_raw) {
        report["baseline"] = baseline_block(events, s, cli, outputs);
    }
    if (cli.schedule_out) {
        outputs.add(cli.schedule_out, schedule_csv(trace));
    }
    outputs.add(cli.metrics_out, dump(report));
}

void cmd_replay(const Cli& cli, OutputSet& outputs) {
    if (cli.baseline_out && !cli.compare_raw) {
        throw UsageError("--baseline-out requires --compare-raw");
    }
    const Settings s = apply_keys(default_settings(ProcessingOrder::kRecovery, 0), cli.keys.merged());
    const std::vector<RecoveryEvent> events = load_events(cli.input, cli.recovery_column);
    const ScheduleTrace trace = run_schedule(events, s);

    json config = config_json(s);
    config["input"] = {{"path", cli.input}, {"recovery_column", cli.recovery_column}};
    json report = {
        {"schema", kReportSchema},
        {"command", "replay"},
        {"config", config},
        {"metrics", metrics_json(trace, s, !cli.no_series)},
    };
    if (cli.compare_raw) {
        report["baseline"] = baseline_block(events, s, cli, outputs);
    }
    if (cli.schedule_out) {
        outputs.add(cli.schedule_out, schedule_csv(trace));
    }
    outputs.add(cli.metrics_out, dump(report));
}

void append_csv_rows(std::ostringstream& csv, const std::string& run, const json& flat) {
    for (const auto& [path, value] : flat.items()) {
        csv << run << ',' << path << ',' << (value.is_string() ? value.get<std::string>() : value.dump())
            << '\n';
    }
}

void cmd_compare(const Cli& cli, OutputSet& outputs) {
    const bool from_pattern = !cli.pattern.empty();
    std::vector<RecoveryEvent> events;
    Settings s;
    json config;
    if (from_pattern) {
        const PatternSpec spec = checked_pattern(cli.pattern);
        s = apply_keys(default_settings(ProcessingOrder::kSequence, kSimulateWarmup),
                       cli.keys.merged());
        events = gen_pattern(spec);
        config = config_json(s);
        config["pattern"] = to_json(spec);
    } else {
        s = apply_keys(default_settings(ProcessingOrder::kRecovery, 0), cli.keys.merged());
        events = load_events(cli.input, cli.recovery_column);
        config = config_json(s);
        config["input"] = {{"path", cli.input}, {"recovery_column", cli.recovery_column}};
    }
    const ScheduleTrace smoothed = run_schedule(events, s);
    const ScheduleTrace raw =
        events.empty() ? run_schedule(events, s) : identity_schedule(events, s.replay);
    const json runs = {
        {"smoothed", metrics_json(smoothed, s, false)},
        {"identity", metrics_json(raw, s, false)},
    };

    if (cli.format == "csv") {
        std::ostringstream csv;
        csv << "run,metric,value\n";
        csv << "schema,version," << kReportSchema << '\n';
        append_csv_rows(csv, "config", config.flatten());
        for (const char* name : {"smoothed", "identity"}) {
            if (!runs[name].is_null()) {
                append_csv_rows(csv, name, runs[name].flatten());
            }
        }
        outputs.add(cli.metrics_out, csv.str());
    } else {
        const json report = {
            {"schema", kReportSchema},
            {"command", "compare"},
            {"config", config},
            {"runs", runs},
        };
        outputs.add(cli.metrics_out, dump(report));
    }
}

void cmd_analyze(const Cli& cli, OutputSet& outputs) {
    json config = {{"g", cli.g}, {"epsilon", cli.epsilon}, {"period", cli.period}};
    FixedPointResult r;
    try {
        if (cli.linear) {
            config["model"] = "linear";
            config["peak"] = cli.peak;
            r = linear_fixed_point(cli.g, cli.epsilon, cli.period, cli.peak);
        } else {
            config["model"] = "exponent";
            config["rho_u"] = cli.rho_u;
            config["rho_l"] = cli.rho_l;
            config["tol"] = cli.tol;
            if (!(cli.tol > 0.0 && cli.tol < 1.0)) {
                throw ParamError("tol must lie in (0, 1)");
            }
            r = exponent_fixed_point({cli.g, cli.epsilon, cli.rho_u, cli.rho_l, cli.period}, cli.tol);
        }
    } catch (const ParamError& e) {
        throw UsageError(e.what());
    }
    const json report = {
        {"schema", kReportSchema},
        {"command", "analyze"},
        {"config", config},
        {"result", to_json(r)},
    };
    outputs.add(cli.metrics_out, dump(report));
}

void write_error(std::ostream& err, const std::string& code, const std::string& message,
                 const std::string& key = {}, std::size_t line = 0) {
    json e = {{"code", code}, {"message", message}};
    if (!key.empty()) {
        e["key"] = key;
    }
    if (line) {
        e["line"] = line;
    }
    err << json{{"error", e}}.dump() << '\n';
}

}  // namespace

Micros parse_duration(std::string_view text) {
    const std::string t = trim(text);
    std::string_view v = t;
    double scale = 0.0;
    if (v.ends_with("us")) {
        scale = 1.0;
        v.remove_suffix(2);
    } else if (v.ends_with("ms")) {
        scale = 1e3;
        v.remove_suffix(2);
    } else if (v.ends_with("s")) {
        scale = 1e6;
        v.remove_suffix(1);
    } else {
        throw UsageError("duration '" + t + "' needs a unit suffix (us, ms, s)");
    }
    double x = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (v.empty() || ec != std::errc() || ptr != end || !std::isfinite(x)) {
        throw UsageError("invalid duration '" + t + "'");
    }
    const double us = x * scale;
    if (std::abs(us) >= 9.2e18) {
        throw UsageError("duration '" + t + "' out of range");
    }
    return round_micros(us);
}

PatternSpec parse_pattern(std::string_view text) {
    PatternSpec spec;
    if (trim(text).empty()) {
        return spec;
    }
    std::set<std::string> seen;
    for (const std::string& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("pattern entry '" + item + "' is not key=value", "pattern");
        }
        const std::string key = trim(std::string_view(item).substr(0, eq));
        const std::string value = trim(std::string_view(item).substr(eq + 1));
        if (!seen.insert(key).second) {
            throw UsageError("pattern key '" + key + "' given twice", key);
        }
        if (key == "P") {
            const std::uint64_t p = parse_count(value, key);
            if (p > 1000000) {
                throw UsageError("pattern period too large", key);
            }
            spec.period = static_cast<std::uint32_t>(p);
        } else if (key == "dh") {
            spec.peak_delay = parse_duration_for(value, key);
        } else if (key == "dl") {
            spec.valley_delay = parse_duration_for(value, key);
        } else if (key == "tau") {
            spec.inter_send = parse_duration_for(value, key);
        } else if (key == "n") {
            spec.count = parse_count(value, key);
        } else {
            throw UsageError("unknown pattern key '" + key + "'", key);
        }
    }
    return spec;
}

const std::vector<std::string>& flat_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& entry : key_table()) {
            k.push_back(entry.first);
        }
        return k;
    }();
    return keys;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Receiver-side release scheduling: simulate, replay, analyze, compare", "relsched"};
    app.require_subcommand(1);
    Cli cli;

    auto* simulate = app.add_subcommand("simulate", "schedule a synthetic delay pattern");
    simulate->add_option("--pattern", cli.pattern, "P=2,dh=100ms,dl=70ms,tau=16.7ms,n=5000");
    add_scheduler_options(simulate, cli);
    add_output_options(simulate, cli);
    simulate->add_option("--sweep", cli.sweeps, "key=v1,v2,... (repeatable, cartesian product)");
    simulate->add_option("--jobs", cli.jobs, "worker threads for --sweep");

    auto* replay_cmd = app.add_subcommand("replay", "schedule a recorded trace");
    replay_cmd->add_option("--input", cli.input, "trace CSV")->required();
    replay_cmd->add_option("--recovery-column", cli.recovery_column, "column read as recovery time");
    add_scheduler_options(replay_cmd, cli);
    add_output_options(replay_cmd, cli);

    auto* compare = app.add_subcommand("compare", "smoothed vs identity release statistics");
    auto* cmp_pattern = compare->add_option("--pattern", cli.pattern, "synthetic pattern");
    auto* cmp_input = compare->add_option("--input", cli.input, "trace CSV");
    cmp_pattern->excludes(cmp_input);
    compare->add_option("--recovery-column", cli.recovery_column, "column read as recovery time");
    add_scheduler_options(compare, cli);
    compare->add_option("--metrics-out", cli.metrics_out, "report path (default stdout)");
    compare->add_option("--format", cli.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* analyze = app.add_subcommand("analyze", "steady-state fixed point of a periodic pattern");
    analyze->add_flag("--linear", cli.linear, "linear shaping, closed form");
    analyze->add_option("--g", cli.g, "peak-valley gap, normalized to U")->required();
    analyze->add_option("--epsilon", cli.epsilon, "down/up gain split")->required();
    auto* a_rho_u = analyze->add_option("--rho-u", cli.rho_u, "late-side exponent");
    auto* a_rho_l = analyze->add_option("--rho-l", cli.rho_l, "early-side exponent");
    auto* a_tol = analyze->add_option("--tol", cli.tol, "relative root tolerance");
    analyze->add_option("--p", cli.period, "pattern period");
    auto* a_peak = analyze->add_option("--peak", cli.peak, "peak delay for the linear model");
    analyze->get_option("--linear")->excludes(a_rho_u)->excludes(a_rho_l)->excludes(a_tol);
    a_peak->needs(analyze->get_option("--linear"));
    analyze->add_option("--metrics-out", cli.metrics_out, "report path (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (compare->parsed() && cli.pattern.empty() && cli.input.empty()) {
            throw UsageError("compare needs --pattern or --input");
        }

        OutputSet outputs(out);
        if (simulate->parsed()) {
            cmd_simulate(cli, outputs);
        } else if (replay_cmd->parsed()) {
            cmd_replay(cli, outputs);
        } else if (compare->parsed()) {
            cmd_compare(cli, outputs);
        } else {
            cmd_analyze(cli, outputs);
        }
        outputs.commit();
        return kExitOk;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return kExitUsage;
    } catch (const UsageError& e) {
        write_error(err, "usage", e.what(), e.key());
        return kExitUsage;
    } catch (const ParamError& e) {
        write_error(err, "usage", e.what());
        return kExitUsage;
    } catch (const DataError& e) {
        write_error(err, "data", e.what(), {}, e.line());
        return kExitData;
    } catch (const IoError& e) {
        write_error(err, "io", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
        return kExitInternal;
    }
}

}  // namespace relsched::cli
