// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <numbers>

#include "twoway/types.hpp"

namespace twoway {

namespace detail {

inline void require_alpha(double alpha) {
    if (!(alpha > 2.0 + min_alpha_margin) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must exceed 2 (csc(2*pi/alpha) pole)");
}

} // namespace detail

// SIR threshold implied by delivering `bits` over bandwidth `hz` at unit
// symbol duration: beta = d^alpha * (2^(bits/hz) - 1). The d^alpha factor is
// folded in so that success events compare fades against unit-distance
// interference sums.
inline double sir_threshold(double bits, double hz, const PathLoss& pl) {
    validate(pl);
    if (!(bits >= 0.0) || !std::isfinite(bits))
        throw std::invalid_argument("sir_threshold: bits must be finite and >= 0");
    if (!(hz > 0.0) || !std::isfinite(hz))
        throw std::invalid_argument("sir_threshold: hz must be finite and > 0");
    return std::pow(pl.d, pl.alpha) * std::expm1(bits / hz * std::numbers::ln2);
}

// Threshold pair for the two directions of one session under an FDD split.
inline SirThresholds sir_thresholds(const TrafficSpec& tr, const BandwidthSplit& sp,
                                    const PathLoss& pl) {
    validate(tr);
    validate(sp);
    return SirThresholds{sir_threshold(tr.b_tr, sp.f_tr, pl),
                         sir_threshold(tr.b_rt, sp.f_rt(), pl)};
}

// Interference scaling constant of the lower (FKG-correlation) success bound:
// c1 = 2 * pi^2 * csc(2*pi/alpha) / alpha. This is also the exact constant of
// the one-way Rayleigh success probability.
inline double interference_constant_lower(double alpha) {
    detail::require_alpha(alpha);
    const double pi = std::numbers::pi;
    return 2.0 * pi * pi / (alpha * std::sin(2.0 * pi / alpha));
}

// Interference scaling constant of the upper (Cauchy-Schwarz) success bound:
// c2 = pi^2 * csc(2*pi/alpha) * (alpha + 2) / alpha^2. Note c2 < c1, so
// exp(-lambda * c2 * s) is the larger of the two exponentials.
inline double interference_constant_upper(double alpha) {
    detail::require_alpha(alpha);
    const double pi = std::numbers::pi;
    return pi * pi * (alpha + 2.0) / (alpha * alpha * std::sin(2.0 * pi / alpha));
}

namespace detail {

inline double threshold_sum(const SirThresholds& th, double alpha) {
    const double delta = 2.0 / alpha;
    return std::pow(th.beta1, delta) + std::pow(th.beta2, delta);
}

} // namespace detail

// Lower bound on the probability that both directions of the typical session
// succeed: exp(-lambda * c1 * (beta1^(2/alpha) + beta2^(2/alpha))).
inline double joint_success_lower(const NetworkDensity& nd, const SirThresholds& th,
                                  double alpha) {
    validate(nd);
    validate(th);
    return std::exp(-nd.lambda * interference_constant_lower(alpha) *
                    detail::threshold_sum(th, alpha));
}

// Upper bound on the joint success probability; same form with c2 in place
// of c1.
inline double joint_success_upper(const NetworkDensity& nd, const SirThresholds& th,
                                  double alpha) {
    validate(nd);
    validate(th);
    return std::exp(-nd.lambda * interference_constant_upper(alpha) *
                    detail::threshold_sum(th, alpha));
}

// Exact one-way success probability of a Rayleigh link against the Poisson
// field: exp(-lambda * c1 * beta^(2/alpha)).
inline double one_way_success(const NetworkDensity& nd, double beta, double alpha) {
    validate(nd);
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("one_way_success: beta must be finite and >= 0");
    return std::exp(-nd.lambda * interference_constant_lower(alpha) *
                    std::pow(beta, 2.0 / alpha));
}

// Density bracket at which the joint success bounds cross 1 - eps. Inverting
// the lower bound gives the smaller (guaranteed-feasible) density, inverting
// the upper bound the larger one.
inline DensityInterval density_interval_at_outage(const OutageTarget& ot,
                                                  const SirThresholds& th, double alpha) {
    validate(ot);
    validate(th);
    const double s = detail::threshold_sum(th, alpha);
    if (s == 0.0)
        throw std::domain_error(
            "density_interval_at_outage: zero thresholds admit unbounded density");
    const double nll = -std::log1p(-ot.eps); // -ln(1 - eps) > 0
    return DensityInterval{nll / (interference_constant_lower(alpha) * s),
                           nll / (interference_constant_upper(alpha) * s)};
}

// Two-way transmission capacity bracket [bits/s/Hz/m^2]: successful session
// density at outage eps times the per-session spectral rate (b_tr + b_rt) /
// f_total. Both ends vanish as eps -> 0 and eps -> 1; the maximum over eps
// sits at 1 - 1/e.
inline CapacityInterval tc_interval(const OutageTarget& ot, const TrafficSpec& tr,
                                    const BandwidthSplit& sp, const PathLoss& pl) {
    validate(ot);
    const SirThresholds th = sir_thresholds(tr, sp, pl);
    const double s = detail::threshold_sum(th, pl.alpha);
    const double scaled = -(1.0 - ot.eps) * std::log1p(-ot.eps);
    const double rate = (tr.b_tr + tr.b_rt) / sp.f_total;
    return CapacityInterval{scaled * rate / (interference_constant_lower(pl.alpha) * s),
                            scaled * rate / (interference_constant_upper(pl.alpha) * s)};
}

} // namespace twoway
