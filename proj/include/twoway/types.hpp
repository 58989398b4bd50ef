// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace twoway {

// The interference scaling constants contain csc(2*pi/alpha), which has a pole
// at alpha = 2. Everything in this library therefore requires alpha to sit
// strictly above 2 by at least this guard.
inline constexpr double min_alpha_margin = 1e-9;

// Power-law path loss r^(-alpha) plus the fixed separation of a
// transmitter/receiver pair.
struct PathLoss {
    double alpha; // path loss exponent, > 2
    double d;     // pair separation [m], > 0

    double delta() const { return 2.0 / alpha; }
};

// Rate demand of one session, per direction.
struct TrafficSpec {
    double b_tr; // forward demand (Tx -> Rx) [bits], > 0
    double b_rt; // reverse demand (Rx -> Tx) [bits], >= 0
};

// FDD partition of the system bandwidth into a forward and a reverse band.
struct BandwidthSplit {
    double f_total; // system bandwidth [Hz], > 0
    double f_tr;    // forward band [Hz], in (0, f_total)

    double f_rt() const { return f_total - f_tr; }
};

// Intensity of the stationary Poisson field of active transmitters. When the
// density arises from slotted-Aloha thinning of a parent process, the parent
// intensity and the access probability may be carried along for reporting.
struct NetworkDensity {
    double lambda; // active transmitter intensity [1/m^2], >= 0
    std::optional<double> lambda0; // parent intensity [1/m^2]
    std::optional<double> p_a;     // access probability in (0, 1]
};

inline NetworkDensity thinned_density(double lambda0, double p_a) {
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0))
        throw std::invalid_argument("NetworkDensity: lambda0 must be finite and >= 0");
    if (!(p_a > 0.0) || !(p_a <= 1.0))
        throw std::invalid_argument("NetworkDensity: p_a must lie in (0, 1]");
    return NetworkDensity{lambda0 * p_a, lambda0, p_a};
}

// Target outage probability for the joint two-way exchange.
struct OutageTarget {
    double eps; // in (0, 1)
};

// SIR thresholds the two directions must clear. These absorb the d^alpha
// factor, so a success event reads S > beta * I with I the sum of
// interferer powers at unit distance scaling.
struct SirThresholds {
    double beta1; // forward threshold, >= 0
    double beta2; // reverse threshold, >= 0
};

// Lower/upper pair of transmission capacity values [bits/s/Hz/m^2].
struct CapacityInterval {
    double lower;
    double upper;
};

// Density range [lambda_lower, lambda_upper] bracketing the maximum
// contention density for a given outage target.
struct DensityInterval {
    double lambda_lower;
    double lambda_upper;
};

inline void validate(const PathLoss& pl) {
    if (!(pl.alpha > 2.0 + min_alpha_margin) || !std::isfinite(pl.alpha))
        throw std::invalid_argument("PathLoss: alpha must exceed 2 (csc(2*pi/alpha) pole)");
    if (!(pl.d > 0.0) || !std::isfinite(pl.d))
        throw std::invalid_argument("PathLoss: d must be finite and > 0");
}

inline void validate(const TrafficSpec& tr) {
    if (!(tr.b_tr > 0.0) || !std::isfinite(tr.b_tr))
        throw std::invalid_argument("TrafficSpec: b_tr must be finite and > 0");
    if (!(tr.b_rt >= 0.0) || !std::isfinite(tr.b_rt))
        throw std::invalid_argument("TrafficSpec: b_rt must be finite and >= 0");
}

inline void validate(const BandwidthSplit& sp) {
    if (!(sp.f_total > 0.0) || !std::isfinite(sp.f_total))
        throw std::invalid_argument("BandwidthSplit: f_total must be finite and > 0");
    if (!(sp.f_tr > 0.0) || !(sp.f_tr < sp.f_total))
        throw std::invalid_argument("BandwidthSplit: f_tr must lie in (0, f_total)");
}

inline void validate(const NetworkDensity& nd) {
    if (!(nd.lambda >= 0.0) || !std::isfinite(nd.lambda))
        throw std::invalid_argument("NetworkDensity: lambda must be finite and >= 0");
    if (nd.lambda0 && (!(*nd.lambda0 >= 0.0) || !std::isfinite(*nd.lambda0)))
        throw std::invalid_argument("NetworkDensity: lambda0 must be finite and >= 0");
    if (nd.p_a && (!(*nd.p_a > 0.0) || !(*nd.p_a <= 1.0)))
        throw std::invalid_argument("NetworkDensity: p_a must lie in (0, 1]");
}

inline void validate(const OutageTarget& ot) {
    if (!(ot.eps > 0.0) || !(ot.eps < 1.0))
        throw std::invalid_argument("OutageTarget: eps must lie in (0, 1)");
}

inline void validate(const SirThresholds& th) {
    if (!(th.beta1 >= 0.0) || !std::isfinite(th.beta1))
        throw std::invalid_argument("SirThresholds: beta1 must be finite and >= 0");
    if (!(th.beta2 >= 0.0) || !std::isfinite(th.beta2))
        throw std::invalid_argument("SirThresholds: beta2 must be finite and >= 0");
}

} // namespace twoway
