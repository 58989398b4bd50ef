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

#include "twoway/analytic.hpp"
#include "twoway/types.hpp"

namespace twoway {

// Transmit antenna array of the forward direction.
struct AntennaConfig {
    int n; // antennas, >= 1
};

// Reverse-band feedback channel that carries the quantised beamforming vector.
struct FeedbackSpec {
    double b_fb;     // feedback budget [bits], > 0
    double c3 = 0.5; // quantisation loss coefficient, in (0, 1]
};

inline void validate(const AntennaConfig& ac) {
    if (ac.n < 1)
        throw std::invalid_argument("AntennaConfig: n must be >= 1");
}

inline void validate(const FeedbackSpec& fs) {
    if (!(fs.b_fb >= 1.0) || !std::isfinite(fs.b_fb))
        throw std::invalid_argument("FeedbackSpec: b_fb must be finite and >= 1");
    if (!(fs.c3 > 0.0) || !(fs.c3 <= 1.0))
        throw std::invalid_argument("FeedbackSpec: c3 must lie in (0, 1]");
}

// Two conventions for combining the beamforming outage factors; `product` is
// the default, `reciprocal` inverts the product for sensitivity studies.
enum class C4Convention { product, reciprocal };

// Two forms of the feedback-link SIR threshold. `conservative` keeps the full
// 2^(b/f) factor; `mi_consistent` uses 2^(b/f) - 1 like every other link
// budget in this library.
enum class FeedbackSirForm { conservative, mi_consistent };

// Fraction of the full beamforming gain retained after quantising the vector
// to b_fb bits: gamma = 1 - c3 * (1/b_fb)^(1/(n-1)). A single antenna needs
// no feedback, so gamma = 1 there. Throws when the parameters drive gamma to
// or below zero, which would make every bound built on it vacuous.
inline double quantization_gain(const FeedbackSpec& fs, const AntennaConfig& ac) {
    validate(fs);
    validate(ac);
    if (ac.n == 1)
        return 1.0;
    const double gamma =
        1.0 - fs.c3 * std::pow(1.0 / fs.b_fb, 1.0 / (ac.n - 1));
    if (!(gamma > 0.0))
        throw std::domain_error("quantization_gain: parameters give gamma <= 0");
    return gamma;
}

// Signal-side factor of the beamforming outage constant:
//
//   1 + sum_{k=0}^{n-2} prod_{l=0}^{k} (l - delta) / (k+1)!
//
// evaluated with the stable term recurrence t_k = t_{k-1} * (k-delta)/(k+1).
// Equals gamma(n - delta) / (gamma(n) * gamma(1 - delta)) in closed form.
inline double beamforming_signal_factor(const AntennaConfig& ac, double alpha) {
    validate(ac);
    detail::require_alpha(alpha);
    const double delta = 2.0 / alpha;
    double sum = 1.0;
    double term = 1.0;
    for (int k = 0; k <= ac.n - 2; ++k) {
        term *= (k - delta) / (k + 1);
        sum += term;
    }
    return sum;
}

// Interference-side factor of the beamforming outage constant:
//
//   (2*pi/alpha) * sum_{k=0}^{n-1} C(n,k) * B(delta + k, n - delta + k)
//
// with each binomial-Beta term assembled in log space so that large n stays
// in range.
inline double beamforming_interference_factor(const AntennaConfig& ac, double alpha) {
    validate(ac);
    detail::require_alpha(alpha);
    const double delta = 2.0 / alpha;
    const double n = ac.n;
    double sum = 0.0;
    for (int k = 0; k < ac.n; ++k) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                std::lgamma(n - k + 1.0) + std::lgamma(delta + k) +
                                std::lgamma(n - delta + k) - std::lgamma(n + 2.0 * k);
        sum += std::exp(log_term);
    }
    return 2.0 * std::numbers::pi / alpha * sum;
}

// Combined beamforming outage constant c4. With a single antenna it collapses
// to the one-way interference constant c1.
inline double beamforming_constant(const AntennaConfig& ac, double alpha,
                                   C4Convention conv = C4Convention::product) {
    const double c =
        beamforming_signal_factor(ac, alpha) * beamforming_interference_factor(ac, alpha);
    return conv == C4Convention::product ? c : 1.0 / c;
}

// SIR threshold of the reverse-band feedback link carrying b_fb bits.
inline double feedback_threshold(const FeedbackSpec& fs, double f_rt, const PathLoss& pl,
                                 FeedbackSirForm form = FeedbackSirForm::conservative) {
    validate(fs);
    validate(pl);
    if (!(f_rt > 0.0) || !std::isfinite(f_rt))
        throw std::invalid_argument("feedback_threshold: f_rt must be finite and > 0");
    const double da = std::pow(pl.d, pl.alpha);
    const double x = fs.b_fb / f_rt * std::numbers::ln2;
    return form == FeedbackSirForm::conservative ? da * std::exp(x) : da * std::expm1(x);
}

// Probability bound together with a flag recording whether it was clamped
// into [0, 1].
struct ProbabilityBound {
    double value;
    bool clamped;
};

// Lower bound on the probability that both the quantised-beamforming data
// link and the feedback link succeed:
//
//   1 - c4 * lambda * n^(-delta) * ((beta1/gamma)^delta + beta3^delta).
//
// The bound is linear in lambda and goes negative at high density; the
// clamped flag records when the returned value was floored at zero.
inline ProbabilityBound feedback_success_lower(const NetworkDensity& nd, double beta1,
                                               double beta3, double gamma,
                                               const AntennaConfig& ac, double alpha,
                                               C4Convention conv = C4Convention::product) {
    validate(nd);
    validate(ac);
    if (!(beta1 >= 0.0) || !(beta3 >= 0.0))
        throw std::invalid_argument("feedback_success_lower: thresholds must be >= 0");
    if (!(gamma > 0.0) || !(gamma <= 1.0))
        throw std::invalid_argument("feedback_success_lower: gamma must lie in (0, 1]");
    const double delta = 2.0 / alpha;
    const double outage = beamforming_constant(ac, alpha, conv) * nd.lambda *
                          std::pow(double(ac.n), -delta) *
                          (std::pow(beta1 / gamma, delta) + std::pow(beta3, delta));
    if (outage >= 1.0)
        return ProbabilityBound{0.0, true};
    return ProbabilityBound{1.0 - outage, false};
}

// Full bound bundle for one feedback configuration.
struct FeedbackBound {
    double gamma;
    double beta3;
    double c4;
    double tc_lower; // [bits/s/Hz/m^2]
};

// Transmission capacity lower bound of the quantised-beamforming scheme:
//
//   tc = (1 - eps) * eps * n^delta / (c4 * ((beta1/gamma)^delta + beta3^delta))
//        * b_tr / f_total.
//
// Holding the thresholds and c4 fixed, doubling n scales the bound by
// 2^(2/alpha).
inline FeedbackBound feedback_tc_lower(const OutageTarget& ot, const TrafficSpec& tr,
                                       const BandwidthSplit& sp, const FeedbackSpec& fs,
                                       const AntennaConfig& ac, const PathLoss& pl,
                                       FeedbackSirForm form = FeedbackSirForm::conservative,
                                       C4Convention conv = C4Convention::product) {
    validate(ot);
    validate(tr);
    validate(sp);
    const double gamma = quantization_gain(fs, ac);
    const double beta1 = sir_threshold(tr.b_tr, sp.f_tr, pl);
    const double beta3 = feedback_threshold(fs, sp.f_rt(), pl, form);
    const double c4 = beamforming_constant(ac, pl.alpha, conv);
    const double delta = pl.delta();
    const double denom =
        c4 * (std::pow(beta1 / gamma, delta) + std::pow(beta3, delta));
    const double tc = (1.0 - ot.eps) * ot.eps * std::pow(double(ac.n), delta) / denom *
                      (tr.b_tr / sp.f_total);
    return FeedbackBound{gamma, beta3, c4, tc};
}

// Reference point: one-way transmission capacity with perfect (genie)
// transmit beamforming over the whole band, i.e. gamma = 1 and no feedback
// link to protect.
inline double oneway_beamforming_tc(const OutageTarget& ot, double bits, double band_hz,
                                    double f_total, const AntennaConfig& ac,
                                    const PathLoss& pl,
                                    C4Convention conv = C4Convention::product) {
    validate(ot);
    if (!(f_total > 0.0) || !std::isfinite(f_total))
        throw std::invalid_argument("oneway_beamforming_tc: f_total must be > 0");
    const double beta = sir_threshold(bits, band_hz, pl);
    const double c4 = beamforming_constant(ac, pl.alpha, conv);
    const double delta = pl.delta();
    return ot.eps * (1.0 - ot.eps) * std::pow(double(ac.n), delta) /
           (c4 * std::pow(beta, delta)) * (bits / f_total);
}

} // namespace twoway
