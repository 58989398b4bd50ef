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
#include <functional>
#include <stdexcept>
#include <vector>

// Self-contained numerical helpers for the test suite. Deliberately
// independent of the library implementation so they can serve as oracles.
namespace testsupport {

// Kolmogorov-Smirnov statistic of a sample against the unit exponential CDF.
inline double ks_statistic_exp1(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = double(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cdf = -std::expm1(-xs[i]);
        d = std::max(d, std::max(cdf - double(i) / n, double(i + 1) / n - cdf));
    }
    return d;
}

// Asymptotic Kolmogorov distribution tail with the small-sample correction
// (n + 0.12 + 0.11/sqrt(n)); adequate far above n = 100.
inline double ks_pvalue(std::size_t n, double d) {
    const double en = std::sqrt(double(n));
    const double t = (en + 0.12 + 0.11 / en) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::exp(-2.0 * double(k) * double(k) * t * t);
        sum += (k % 2 == 1) ? term : -term;
    }
    return std::clamp(sum, 0.0, 1.0);
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double fa,
                      double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// `force` levels are always subdivided before the agreement test applies:
// midpoint-symmetric integrands (even trig powers, for one) can make the
// first refinement agree with the whole-interval estimate to machine
// precision while both are far from the integral.
inline double adaptive(const std::function<double(double)>& f, double a, double fa,
                       double b, double fb, double m, double fm, double whole, double tol,
                       int depth, int force) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    if (depth <= 0 ||
        (force <= 0 && std::fabs(left + right - whole) <= 15.0 * tol))
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, force - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, force - 1);
}

} // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return detail::adaptive(f, a, fa, b, fb, m, fm, detail::simpson(f, a, fa, b, fb, m, fm),
                            tol, 48, 5);
}

// Euler Beta function by quadrature via u = sin^2(theta); valid for p >= 1/2
// and q >= 1/2, where the integrand stays bounded.
inline double beta_quadrature(double p, double q, double tol = 1e-12) {
    if (p < 0.5 || q < 0.5)
        throw std::invalid_argument("beta_quadrature: needs p, q >= 1/2");
    auto f = [p, q](double th) {
        const double s = std::sin(th);
        const double c = std::cos(th);
        return 2.0 * std::pow(s, 2.0 * p - 1.0) * std::pow(c, 2.0 * q - 1.0);
    };
    const double half_pi = std::acos(-1.0) / 2.0;
    return integrate(f, 0.0, half_pi, tol);
}

// Coarse global grid minimiser with local refinement rounds; oracle for the
// bandwidth-split solver.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          int points, int refinements) {
    double best_x = lo;
    double best_f = f(lo);
    auto scan = [&](double a, double b, int n) {
        for (int i = 0; i <= n; ++i) {
            const double x = a + (b - a) * double(i) / double(n);
            const double v = f(x);
            if (v < best_f) {
                best_f = v;
                best_x = x;
            }
        }
    };
    scan(lo, hi, points);
    double span = (hi - lo) / double(points);
    for (int r = 0; r < refinements; ++r) {
        const double a = std::max(lo, best_x - span);
        const double b = std::min(hi, best_x + span);
        scan(a, b, 2000);
        span = (b - a) / 2000.0;
    }
    return best_x;
}

} // namespace testsupport
