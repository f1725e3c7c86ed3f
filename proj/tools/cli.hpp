#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relsched/analytic.hpp"
#include "relsched/types.hpp"

namespace relsched::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitData = 3,
};

class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
    UsageError(const std::string& what, std::string key)
        : std::invalid_argument(what), key_(std::move(key)) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// "16.7ms", "500us", "1.25s". A unit suffix is mandatory; the result is rounded to
// whole microseconds.
Micros parse_duration(std::string_view text);

// Comma-separated key=value list with keys P, dh, dl, tau, n. Missing keys keep the
// PatternSpec defaults.
PatternSpec parse_pattern(std::string_view text);

// Flat parameter keys accepted by --set and --sweep, in canonical order.
const std::vector<std::string>& flat_keys();

// Runs one invocation. `args` excludes the program name. Reports go to `out` unless
// redirected to files; errors are written to `err` as a JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relsched::cli
