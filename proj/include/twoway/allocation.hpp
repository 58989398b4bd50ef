// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twoway/types.hpp"

namespace twoway {

// Bandwidth split optimisation: minimise over x in (0, f_total)
//
//   f(x) = (2^(b_tr/x) - 1)^delta + (2^(b_rt/(f_total-x)) - 1)^delta
//
// with delta = 2/alpha. Minimising f maximises every capacity expression of
// the form const / f(x), so the split is rate-optimal for the whole
// lower/upper bracket at once.
struct AllocationProblem {
    TrafficSpec traffic;
    double f_total; // [Hz], > 0
    double delta;   // 2/alpha, in (0, 1)
};

struct AllocationResult {
    double f_tr_star;           // minimising forward bandwidth [Hz]
    double objective_at_star;   // f(f_tr_star)
    double residual;            // stationarity gap at the returned split
    double gain_vs_proportional; // f(x_prop)/f(x_star) - 1, >= 0
};

inline AllocationProblem allocation_problem(const TrafficSpec& tr, double f_total,
                                            const PathLoss& pl) {
    validate(tr);
    validate(pl);
    if (!(f_total > 0.0) || !std::isfinite(f_total))
        throw std::invalid_argument("AllocationProblem: f_total must be finite and > 0");
    return AllocationProblem{tr, f_total, pl.delta()};
}

inline void validate(const AllocationProblem& p) {
    validate(p.traffic);
    if (!(p.f_total > 0.0) || !std::isfinite(p.f_total))
        throw std::invalid_argument("AllocationProblem: f_total must be finite and > 0");
    if (!(p.delta > 0.0) || !(p.delta < 1.0))
        throw std::invalid_argument("AllocationProblem: delta must lie in (0, 1)");
}

// Scale-free kernel of the stationarity condition:
//
//   h(t) = t^2 * 2^t * (2^t - 1)^(delta - 1),   h(0) = 0.
//
// h is continuous and strictly increasing on [0, inf). For large t the three
// factors overflow/underflow separately, so the tail is evaluated in log
// space; it saturates cleanly to +inf once the true value leaves double
// range.
inline double h_kernel(double t, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("h_kernel: delta must lie in (0, 1)");
    if (!(t >= 0.0) || std::isnan(t))
        throw std::invalid_argument("h_kernel: t must be >= 0");
    if (t == 0.0)
        return 0.0;
    if (t < 1000.0) {
        const double m = std::expm1(t * std::numbers::ln2); // 2^t - 1
        return t * t * std::exp2(t) * std::pow(m, delta - 1.0);
    }
    // ln h = 2 ln t + t ln2 + (delta - 1) ln(2^t - 1); the last term equals
    // (delta - 1) * t * ln2 to double precision once 2^-t is negligible.
    return std::exp(2.0 * std::log(t) + delta * t * std::numbers::ln2);
}

// Objective f(x) above. Defined on the open interval (0, f_total); the value
// may saturate to +inf near the edges, which the solver relies on.
inline double split_objective(double x, const AllocationProblem& p) {
    validate(p);
    if (!(x > 0.0) || !(x < p.f_total))
        throw std::invalid_argument("split_objective: x must lie in (0, f_total)");
    const double a = std::expm1(p.traffic.b_tr / x * std::numbers::ln2);
    const double b = std::expm1(p.traffic.b_rt / (p.f_total - x) * std::numbers::ln2);
    return std::pow(a, p.delta) + std::pow(b, p.delta);
}

// Scaled negative derivative of the objective
//
//   g(x) = h(b_tr/x)/b_tr - h(b_rt/(f_total-x))/b_rt,
//
// so that f'(x) = -delta * ln2 * g(x). g runs from +inf at x -> 0+ to -inf
// at x -> f_total- and crosses zero exactly once, at the minimiser of f.
// Requires strictly positive demand in both directions.
inline double split_derivative(double x, const AllocationProblem& p) {
    validate(p);
    if (!(p.traffic.b_rt > 0.0))
        throw std::invalid_argument("split_derivative: requires b_rt > 0");
    if (!(x > 0.0) || !(x < p.f_total))
        throw std::invalid_argument("split_derivative: x must lie in (0, f_total)");
    return h_kernel(p.traffic.b_tr / x, p.delta) / p.traffic.b_tr -
           h_kernel(p.traffic.b_rt / (p.f_total - x), p.delta) / p.traffic.b_rt;
}

// Demand-proportional split x = f_total * b_tr / (b_tr + b_rt). Optimal for
// symmetric demand, and the natural reference point for the gain metric.
// With b_rt = 0 the whole band goes forward.
inline double proportional_split(const AllocationProblem& p) {
    validate(p);
    return p.f_total * p.traffic.b_tr / (p.traffic.b_tr + p.traffic.b_rt);
}

// Bisection on the sign change of g. The bracket is pinned at eta = 1e-9 *
// f_total away from the band edges, where g is guaranteed positive resp.
// negative; tol <= 0 selects the default width 1e-9 * f_total.
inline AllocationResult optimal_split(const AllocationProblem& p, double tol = 0.0) {
    validate(p);
    if (!(p.traffic.b_rt > 0.0))
        throw std::invalid_argument("optimal_split: requires b_rt > 0");
    if (tol <= 0.0)
        tol = 1e-9 * p.f_total;
    const double eta = 1e-9 * p.f_total;
    double lo = eta;
    double hi = p.f_total - eta;
    const double g_lo = split_derivative(lo, p);
    const double g_hi = split_derivative(hi, p);
    if (!(g_lo > 0.0) || !(g_hi < 0.0))
        throw std::runtime_error("optimal_split: derivative bracket has no sign change");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break; // bracket exhausted at floating point resolution
        const double g_mid = split_derivative(mid, p);
        if (g_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        (g_mid > 0.0 ? lo : hi) = mid;
    }
    const double x_star = 0.5 * (lo + hi);
    const double f_star = split_objective(x_star, p);
    const double f_prop = split_objective(proportional_split(p), p);
    return AllocationResult{x_star, f_star, split_derivative(x_star, p),
                           std::max(0.0, f_prop / f_star - 1.0)};
}

// Relative capacity improvement of the optimal split over the
// demand-proportional one. Zero for symmetric demand.
inline double allocation_gain(const AllocationProblem& p) {
    return optimal_split(p).gain_vs_proportional;
}

} // namespace twoway
