#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace relsched {

// Receiver- and sender-clock instants and durations, in microseconds.
using Micros = std::int64_t;

constexpr Micros kMicrosPerMilli = 1000;
constexpr Micros kMicrosPerSecond = 1000000;

constexpr Micros from_millis(double ms) {
    return static_cast<Micros>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5));
}

constexpr double to_millis(double us) { return us / 1000.0; }

// Rounds to the nearest microsecond, ties to even.
inline Micros round_micros(double us) { return static_cast<Micros>(std::llrint(us)); }

// Invalid parameters or malformed configuration. The CLI maps this to exit code 2.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data that violates the event model (negative timestamps, duplicate
// sequence numbers, unparsable rows). The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}

    // 1-based input line, or 0 when not tied to a file.
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct RecoveryEvent {
    std::uint64_t seq = 0;
    Micros sender_ts = 0;    // S_n, sender clock
    Micros recovery_ts = 0;  // A_n, receiver clock
    std::optional<std::uint64_t> size_bytes;

    friend bool operator==(const RecoveryEvent&, const RecoveryEvent&) = default;
};

}  // namespace relsched
