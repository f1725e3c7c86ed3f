#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "relsched/types.hpp"

namespace relsched {

// Periodic delay pattern: one object at peak delay followed by period - 1 objects at
// valley delay, sent every inter_send.
struct PatternSpec {
    Micros peak_delay = 100 * kMicrosPerMilli;
    Micros valley_delay = 70 * kMicrosPerMilli;
    std::uint32_t period = 2;
    Micros inter_send = 16700;
    std::size_t count = 5000;

    Micros gap() const { return peak_delay - valley_delay; }
};

// Throws ParamError. `allow_flat` admits peak == valley (a constant-delay stream),
// which the fixed-point analysis excludes but simulation accepts; `count` may be
// smaller than `period` only when it is zero.
void validate(const PatternSpec& spec, bool allow_flat = false);

// Steady-state solution in the lambda -> 0 limit.
struct FixedPointResult {
    double delta = 0.0;               // distance below the peak
    double equilibrium_offset = 0.0;  // peak - delta
    std::optional<double> bound;      // upper bound on delta
    bool bound_valid = false;         // epsilon < 1 / P
    int iterations = 0;               // bisection steps (0 for closed form)
};

// Up/down gains from the (lambda, epsilon) parametrization.
struct Gains {
    double up = 0.0;    // lambda_u = (1 - epsilon) * lambda
    double down = 0.0;  // lambda_l = epsilon * lambda
};

Gains split_gains(double lambda, double epsilon);

// Inverse of split_gains: lambda = up + down, epsilon = down / lambda.
struct GainPair {
    double lambda = 0.0;
    double epsilon = 0.0;
};
GainPair combine_gains(double lambda_u, double lambda_l);

// Linear shaping: delta = (P - 1) eps g / (1 + (P - 2) eps). `gap` and `peak` share
// any unit. Throws ParamError outside 0 < eps < 1, P >= 2, gap > 0.
FixedPointResult linear_fixed_point(double gap, double epsilon, std::uint32_t period,
                                    double peak = 1.0);

struct ExponentProblem {
    double gap = 0.3;  // normalized so that U = peak = 1; 0 < gap < 1
    double epsilon = 0.2;
    double rho_u = 0.5;
    double rho_l = 2.0;
    std::uint32_t period = 2;
};

constexpr int kBisectionCap = 200;
constexpr double kDefaultRootTolerance = 1e-12;

// Unique root in (0, gap) of (1 - eps) delta^rho_u = (P - 1) eps (gap - delta)^rho_l by
// bisection, to relative tolerance `tol`. Throws ParamError for domain violations and
// std::runtime_error if the tolerance is not met within kBisectionCap iterations.
FixedPointResult exponent_fixed_point(const ExponentProblem& problem,
                                      double tol = kDefaultRootTolerance);

// ((P - 1) eps / (1 - eps))^(1 / rho_u) * gap^(rho_l / rho_u).
double fixed_point_bound(const ExponentProblem& problem);

}  // namespace relsched
