#include "relsched/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relsched {
namespace {

void check_common(double gap, double epsilon, std::uint32_t period) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ParamError("epsilon must lie in (0, 1)");
    }
    if (period < 2) {
        throw ParamError("pattern period must be >= 2");
    }
    if (!(gap > 0.0) || !std::isfinite(gap)) {
        throw ParamError("gap must be > 0");
    }
}

}  // namespace

void validate(const PatternSpec& s, bool allow_flat) {
    if (s.valley_delay < 0) {
        throw ParamError("valley delay must be >= 0");
    }
    if (allow_flat ? s.valley_delay > s.peak_delay : s.valley_delay >= s.peak_delay) {
        throw ParamError("valley delay must be below the peak delay");
    }
    if (s.period < 2) {
        throw ParamError("pattern period must be >= 2");
    }
    if (s.inter_send <= 0) {
        throw ParamError("inter-send interval must be > 0");
    }
    if (s.count != 0 && s.count < s.period) {
        throw ParamError("pattern must contain at least one full period");
    }
}

Gains split_gains(double lambda, double epsilon) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ParamError("lambda must be > 0");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ParamError("epsilon must lie in (0, 1)");
    }
    return Gains{(1.0 - epsilon) * lambda, epsilon * lambda};
}

GainPair combine_gains(double lambda_u, double lambda_l) {
    if (!(lambda_u > 0.0) || !(lambda_l > 0.0)) {
        throw ParamError("gains must be > 0");
    }
    const double lambda = lambda_u + lambda_l;
    return GainPair{lambda, lambda_l / lambda};
}

FixedPointResult linear_fixed_point(double gap, double epsilon, std::uint32_t period, double peak) {
    check_common(gap, epsilon, period);
    const double p = static_cast<double>(period);
    FixedPointResult r;
    r.delta = (p - 1.0) * epsilon * gap / (1.0 + (p - 2.0) * epsilon);
    r.equilibrium_offset = peak - r.delta;
    r.bound = (p - 1.0) * epsilon / (1.0 - epsilon) * gap;
    r.bound_valid = epsilon < 1.0 / p;
    return r;
}

double fixed_point_bound(const ExponentProblem& q) {
    const double p = static_cast<double>(q.period);
    const double factor = (p - 1.0) * q.epsilon / (1.0 - q.epsilon);
    return std::pow(factor, 1.0 / q.rho_u) * std::pow(q.gap, q.rho_l / q.rho_u);
}

FixedPointResult exponent_fixed_point(const ExponentProblem& q, double tol) {
    check_common(q.gap, q.epsilon, q.period);
    if (!(q.gap < 1.0)) {
        throw ParamError("normalized gap must be < 1");
    }
    if (!(q.rho_u > 0.0 && q.rho_u <= 1.0)) {
        throw ParamError("rho_u must lie in (0, 1]");
    }
    if (!(q.rho_l >= 1.0) || !std::isfinite(q.rho_l)) {
        throw ParamError("rho_l must be >= 1");
    }
    if (!(tol > 0.0)) {
        throw ParamError("tolerance must be > 0");
    }

    const double p = static_cast<double>(q.period);
    // Increasing in delta: negative near 0, positive near gap.
    auto balance = [&](double delta) {
        return (1.0 - q.epsilon) * std::pow(delta, q.rho_u) -
               (p - 1.0) * q.epsilon * std::pow(q.gap - delta, q.rho_l);
    };

    double lo = 0.0;
    double hi = q.gap;
    FixedPointResult r;
    bool converged = false;
    for (int i = 0; i < kBisectionCap; ++i) {
        const double mid = 0.5 * (lo + hi);
        r.iterations = i + 1;
        if (mid <= lo || mid >= hi) {
            converged = true;  // interval at machine resolution
            break;
        }
        if (balance(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= tol * lo) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw std::runtime_error("bisection did not reach tolerance " + std::to_string(tol) +
                                 " within " + std::to_string(kBisectionCap) + " iterations");
    }
    r.delta = 0.5 * (lo + hi);
    r.equilibrium_offset = 1.0 - r.delta;
    r.bound = fixed_point_bound(q);
    r.bound_valid = q.epsilon < 1.0 / p;
    return r;
}

}  // namespace relsched
