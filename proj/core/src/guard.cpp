#include "relsched/guard.hpp"

namespace relsched {

ReleaseDecision guarded_release(std::uint64_t seq, Micros candidate,
                                std::optional<Micros> predecessor_release, Micros guard) {
    if (guard < 0) {
        throw ParamError("guard window must be >= 0");
    }
    ReleaseDecision d{seq, candidate, candidate, false};
    if (!predecessor_release || *predecessor_release <= candidate) {
        return d;
    }
    if (*predecessor_release < candidate + guard) {
        d.release_ts = *predecessor_release;
        return d;
    }
    d.release_ts = candidate + guard;
    d.overtook_predecessor = true;
    return d;
}

ReleaseDecision release_past_lost_predecessor(std::uint64_t seq, Micros candidate, Micros guard) {
    if (guard < 0) {
        throw ParamError("guard window must be >= 0");
    }
    return ReleaseDecision{seq, candidate, candidate + guard, true};
}

std::vector<ReleaseDecision> apply_guard(std::span<const GuardCandidate> by_seq) {
    std::vector<ReleaseDecision> out;
    out.reserve(by_seq.size());
    for (std::size_t i = 0; i < by_seq.size(); ++i) {
        const GuardCandidate& c = by_seq[i];
        if (i > 0 && by_seq[i - 1].seq >= c.seq) {
            throw DataError("guard input not strictly ordered by sequence number");
        }
        if (c.exempt) {
            out.push_back(ReleaseDecision{c.seq, c.candidate_ts, c.candidate_ts, false});
        } else if (i == 0) {
            out.push_back(guarded_release(c.seq, c.candidate_ts, std::nullopt, c.guard));
        } else if (by_seq[i - 1].seq + 1 != c.seq) {
            out.push_back(release_past_lost_predecessor(c.seq, c.candidate_ts, c.guard));
        } else {
            out.push_back(guarded_release(c.seq, c.candidate_ts, out.back().release_ts, c.guard));
        }
    }
    return out;
}

}  // namespace relsched
