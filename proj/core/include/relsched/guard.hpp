#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relsched/types.hpp"

namespace relsched {

struct ReleaseDecision {
    std::uint64_t seq = 0;
    Micros candidate_ts = 0;  // T_n from ADC or QADC
    Micros release_ts = 0;    // actual release after the guard
    bool overtook_predecessor = false;

    friend bool operator==(const ReleaseDecision&, const ReleaseDecision&) = default;
};

// Bounded in-order release for object `seq` with candidate time T_n.
//
//   predecessor released by T_n          -> release at T_n
//   predecessor releases in [T_n, T_n+G) -> release at the predecessor's instant,
//                                           ordered after it by sequence number
//   otherwise                            -> release at T_n + G, overtaking
//
// `predecessor_release` is empty when n has no predecessor (head of stream).
ReleaseDecision guarded_release(std::uint64_t seq, Micros candidate,
                                std::optional<Micros> predecessor_release, Micros guard);

// A predecessor that will never be released (lost) holds n for the full window.
ReleaseDecision release_past_lost_predecessor(std::uint64_t seq, Micros candidate, Micros guard);

struct GuardCandidate {
    std::uint64_t seq = 0;
    Micros candidate_ts = 0;
    Micros guard = 0;        // G in effect when the object was recovered
    bool exempt = false;     // bypassed objects release at their candidate unguarded
};

// Applies the guard across a stream. `by_seq` must be sorted by strictly increasing
// seq. A gap in sequence numbers is treated as a lost predecessor; the first entry
// has none. Decisions are returned in the same order.
std::vector<ReleaseDecision> apply_guard(std::span<const GuardCandidate> by_seq);

// Lexicographic (release_ts, seq) order used to break simultaneous releases.
inline bool released_before(const ReleaseDecision& a, const ReleaseDecision& b) {
    return a.release_ts != b.release_ts ? a.release_ts < b.release_ts : a.seq < b.seq;
}

}  // namespace relsched
