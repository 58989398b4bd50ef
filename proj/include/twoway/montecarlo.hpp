// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "twoway/analytic.hpp"
#include "twoway/types.hpp"

namespace twoway {

// Raised when a stochastic search cannot deliver the requested resolution,
// typically because the per-estimate confidence interval is wider than the
// bracket the caller asked for. The cure is more trials per estimate.
struct SimulationNonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Circular sampling window for the interferer field, centred between the
// typical pair. Truncating the Poisson field at radius r biases success
// probabilities upward by roughly lambda * pi * beta^(2/alpha) / r^2 summed
// over the active thresholds; the default 20 pair separations keeps that far
// below Monte Carlo noise for every configuration in this library.
struct SimRegion {
    double radius; // [m], > 0
};

inline SimRegion default_region(const PathLoss& pl) {
    validate(pl);
    return SimRegion{20.0 * pl.d};
}

// Trial budget plus the master seed every substream derives from.
struct TrialPlan {
    long long n_trials;
    std::uint64_t master_seed;
};

struct Point {
    double x;
    double y;
};

// One realisation of the interfering transmitter/receiver pairs. Entry i of
// `rx` is the partner of entry i of `tx`, at the common pair separation in a
// uniform random direction.
struct PairSample {
    std::vector<Point> tx;
    std::vector<Point> rx;
};

// Unit-mean exponential fade powers for one trial: the two desired links of
// the typical pair plus one independent fade per interferer and direction.
struct TrialFades {
    double fwd_signal;
    double rev_signal;
    std::vector<double> fwd_interference;
    std::vector<double> rev_interference;
};

struct TrialOutcome {
    bool fwd_ok;
    bool rev_ok;
    bool joint_ok;
};

// Binomial point estimate with a normal-approximation confidence interval,
// ci_halfwidth = 1.96 * sqrt(p * (1 - p) / n).
struct TrialEstimate {
    double p_hat;
    double ci_halfwidth;
    long long n_effective;
};

struct JointEstimates {
    TrialEstimate joint;
    TrialEstimate fwd;
    TrialEstimate rev;
};

namespace detail {

// SplitMix64 finaliser; decorrelates consecutive trial indices into
// independent-looking 64-bit seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index) {
    return mix64(master + 0x9E3779B97F4A7C15ull * (trial_index + 1));
}

// 53-bit uniform in [0, 1).
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

inline double unit_exponential(std::mt19937_64& rng) {
    return -std::log1p(-uniform01(rng));
}

// Two independent standard normals (Box-Muller).
inline std::pair<double, double> gaussian_pair(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng); // (0, 1]
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

// |p|^(-alpha) for an offset p, with the alpha = 4 fast path that dominates
// the shipped configurations.
inline double pathloss_power(double dx, double dy, double alpha) {
    const double r2 = dx * dx + dy * dy;
    if (alpha == 4.0)
        return 1.0 / (r2 * r2);
    return std::pow(r2, -0.5 * alpha);
}

inline long long poisson_count(std::mt19937_64& rng, double mean) {
    if (!(mean > 0.0))
        return 0;
    std::poisson_distribution<long long> pd(mean);
    return pd(rng);
}

// Per-trial draw order is part of the determinism contract: interferer
// count, then per interferer (radius, angle, partner direction), then
// whatever fades the caller draws afterwards.
inline void fill_pair_sample(PairSample& out, double lambda, double radius,
                             double pair_distance, std::mt19937_64& rng) {
    out.tx.clear();
    out.rx.clear();
    const long long k =
        poisson_count(rng, lambda * std::numbers::pi * radius * radius);
    out.tx.reserve(std::size_t(k));
    out.rx.reserve(std::size_t(k));
    const double cx = 0.5 * pair_distance;
    for (long long i = 0; i < k; ++i) {
        const double r = radius * std::sqrt(uniform01(rng));
        const double th = 2.0 * std::numbers::pi * uniform01(rng);
        const double x = cx + r * std::cos(th);
        const double y = r * std::sin(th);
        const double phi = 2.0 * std::numbers::pi * uniform01(rng);
        out.tx.push_back({x, y});
        out.rx.push_back({x + pair_distance * std::cos(phi),
                          y + pair_distance * std::sin(phi)});
    }
}

// Draw order: forward signal, reverse signal, all forward interferer fades,
// all reverse interferer fades.
inline void fill_fades(TrialFades& out, std::size_t n_interferers, std::mt19937_64& rng) {
    out.fwd_signal = unit_exponential(rng);
    out.rev_signal = unit_exponential(rng);
    out.fwd_interference.clear();
    out.rev_interference.clear();
    out.fwd_interference.reserve(n_interferers);
    out.rev_interference.reserve(n_interferers);
    for (std::size_t i = 0; i < n_interferers; ++i)
        out.fwd_interference.push_back(unit_exponential(rng));
    for (std::size_t i = 0; i < n_interferers; ++i)
        out.rev_interference.push_back(unit_exponential(rng));
}

inline int resolve_threads(int requested, long long n_trials) {
    int t = requested;
    if (t <= 0) {
        if (const char* env = std::getenv("TWOWAY_TC_THREADS"))
            t = std::atoi(env);
    }
    if (t <= 0)
        t = int(std::thread::hardware_concurrency());
    if (t < 1)
        t = 1;
    if (t > 64)
        t = 64;
    if (n_trials < t)
        t = int(n_trials);
    return t;
}

// Runs `worker(first, last, slot)` over a contiguous partition of
// [0, n_trials). Results land in per-chunk slots and are combined by integer
// addition afterwards, so the outcome is identical for every thread count.
template <class Tally, class Worker>
std::vector<Tally> run_partitioned(long long n_trials, int threads, Worker&& worker) {
    std::vector<Tally> slots(static_cast<std::size_t>(threads));
    if (threads == 1) {
        worker(0, n_trials, slots[0]);
        return slots;
    }
    const long long chunk = (n_trials + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int w = 0; w < threads; ++w) {
        const long long t0 = w * chunk;
        const long long t1 = std::min(n_trials, t0 + chunk);
        if (t0 >= t1)
            break;
        pool.emplace_back([&worker, &slots, w, t0, t1] { worker(t0, t1, slots[std::size_t(w)]); });
    }
    for (auto& th : pool)
        th.join();
    return slots;
}

inline TrialEstimate make_estimate(long long hits, long long n) {
    const double p = n > 0 ? double(hits) / double(n) : 0.0;
    const double var = std::max(p * (1.0 - p), 0.0);
    return TrialEstimate{p, 1.96 * std::sqrt(var / double(n)), n};
}

inline void require_sim_inputs(double lambda, const TrialPlan& plan,
                               const SimRegion& region, const PathLoss& pl) {
    validate(pl);
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be finite and >= 0");
    if (plan.n_trials <= 0)
        throw std::invalid_argument("TrialPlan: n_trials must be > 0");
    if (!(region.radius > 0.0) || !std::isfinite(region.radius))
        throw std::invalid_argument("SimRegion: radius must be finite and > 0");
    if (region.radius < 20.0 * pl.d * (1.0 - 1e-12))
        throw std::invalid_argument(
            "SimRegion: radius must be at least 20 pair separations (truncation bias)");
}

} // namespace detail

inline PairSample sample_interferer_pairs(double lambda, const SimRegion& region,
                                          double pair_distance, std::mt19937_64& rng) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("sample_interferer_pairs: lambda must be >= 0");
    if (!(region.radius > 0.0) || !(pair_distance > 0.0))
        throw std::invalid_argument("sample_interferer_pairs: radius and distance must be > 0");
    PairSample s;
    detail::fill_pair_sample(s, lambda, region.radius, pair_distance, rng);
    return s;
}

inline TrialFades draw_fade_powers(std::size_t n_interferers, std::mt19937_64& rng) {
    TrialFades f;
    detail::fill_fades(f, n_interferers, rng);
    return f;
}

// Success events of one trial. The typical receiver sits at the origin, its
// transmitter at (d, 0). Forward interference comes from the interfering
// transmitters as seen from the origin; reverse interference from their
// partner receivers as seen from (d, 0). Thresholds carry the d^alpha
// factor, so the desired fade is compared directly against beta times the
// interference sum. A zero threshold always succeeds.
inline TrialOutcome joint_success_trial(const PairSample& sample, const TrialFades& fades,
                                        const SirThresholds& th, const PathLoss& pl) {
    if (sample.tx.size() != fades.fwd_interference.size() ||
        sample.rx.size() != fades.rev_interference.size())
        throw std::invalid_argument("joint_success_trial: sample/fade sizes disagree");
    bool fwd = true;
    if (th.beta1 > 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sample.tx.size(); ++i)
            acc += detail::pathloss_power(sample.tx[i].x, sample.tx[i].y, pl.alpha) *
                   fades.fwd_interference[i];
        fwd = fades.fwd_signal > th.beta1 * acc;
    }
    bool rev = true;
    if (th.beta2 > 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sample.rx.size(); ++i)
            acc += detail::pathloss_power(sample.rx[i].x - pl.d, sample.rx[i].y, pl.alpha) *
                   fades.rev_interference[i];
        rev = fades.rev_signal > th.beta2 * acc;
    }
    return TrialOutcome{fwd, rev, fwd && rev};
}

// Monte Carlo estimate of the joint and per-direction success probabilities.
// Trials are independent substreams keyed by (master_seed, trial index), so
// the three tallies are identical for every thread count. `threads` <= 0
// defers to TWOWAY_TC_THREADS, then to the hardware count.
inline JointEstimates estimate_joint_success(double lambda, const SirThresholds& th,
                                             const TrialPlan& plan, const SimRegion& region,
                                             const PathLoss& pl, int threads = 0) {
    validate(th);
    detail::require_sim_inputs(lambda, plan, region, pl);
    struct Tally {
        long long joint = 0, fwd = 0, rev = 0;
    };
    const int nt = detail::resolve_threads(threads, plan.n_trials);
    auto worker = [&](long long t0, long long t1, Tally& slot) {
        PairSample sample;
        TrialFades fades;
        Tally local;
        for (long long t = t0; t < t1; ++t) {
            std::mt19937_64 rng(detail::trial_seed(plan.master_seed, std::uint64_t(t)));
            detail::fill_pair_sample(sample, lambda, region.radius, pl.d, rng);
            detail::fill_fades(fades, sample.tx.size(), rng);
            const TrialOutcome o = joint_success_trial(sample, fades, th, pl);
            local.fwd += o.fwd_ok;
            local.rev += o.rev_ok;
            local.joint += o.joint_ok;
        }
        slot = local;
    };
    const auto slots = detail::run_partitioned<Tally>(plan.n_trials, nt, worker);
    Tally total;
    for (const auto& s : slots) {
        total.joint += s.joint;
        total.fwd += s.fwd;
        total.rev += s.rev;
    }
    return JointEstimates{detail::make_estimate(total.joint, plan.n_trials),
                          detail::make_estimate(total.fwd, plan.n_trials),
                          detail::make_estimate(total.rev, plan.n_trials)};
}

namespace detail {

template <class Estimates>
struct InversionResult {
    double lambda_hat;
    double lambda_ci_halfwidth;
    Estimates at_lambda;
};

// Bisects a stochastically evaluated, decreasing success curve until the
// bracket is narrower than rel_tol relative to its midpoint. Every estimate
// reuses the same trial plan (common random numbers), which keeps the sample
// curve close to monotone. Throws SimulationNonConvergence when the
// confidence interval translates into more density uncertainty than the
// requested bracket, i.e. when more trials, not more bisection steps, are
// needed.
template <class Estimator>
auto invert_success_curve(Estimator&& est, double target, double lo, double hi,
                          double rel_tol)
    -> InversionResult<std::decay_t<decltype(est(1.0))>> {
    using Estimates = std::decay_t<decltype(est(1.0))>;
    Estimates e_lo = est(lo);
    for (int guard = 0; e_lo.joint.p_hat < target; ++guard) {
        if (guard > 60)
            throw SimulationNonConvergence("invert_success_curve: no density reaches the target");
        lo *= 0.25;
        e_lo = est(lo);
    }
    Estimates e_hi = est(hi);
    for (int guard = 0; e_hi.joint.p_hat >= target; ++guard) {
        if (guard > 60)
            throw SimulationNonConvergence("invert_success_curve: target never crossed from above");
        hi *= 4.0;
        e_hi = est(hi);
    }
    while (hi - lo > rel_tol * 0.5 * (hi + lo)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        Estimates e_mid = est(mid);
        if (e_mid.joint.p_hat >= target)
            lo = mid;
        else
            hi = mid;
    }
    const double lambda_hat = 0.5 * (lo + hi);
    const Estimates at = est(lambda_hat);
    // Slope scale of the fitted exponential decay through (lambda_hat, target);
    // used to convert probability noise into density noise.
    const double slope = target * -std::log(target) / lambda_hat;
    const double lambda_ci = slope > 0.0 ? at.joint.ci_halfwidth / slope : hi - lo;
    if (lambda_ci > 3.0 * rel_tol * lambda_hat)
        throw SimulationNonConvergence(
            "invert_success_curve: estimator noise exceeds bracket resolution; raise n_trials");
    if (std::fabs(at.joint.p_hat - target) >
        3.0 * at.joint.ci_halfwidth + slope * (hi - lo))
        throw SimulationNonConvergence(
            "invert_success_curve: returned density misses the target beyond noise");
    return InversionResult<Estimates>{lambda_hat, lambda_ci, at};
}

} // namespace detail

using DensityEstimate = detail::InversionResult<JointEstimates>;

// Largest density whose simulated joint success probability still meets
// 1 - eps, located by stochastic bisection seeded from the analytic density
// bracket.
inline DensityEstimate estimate_density_at_outage(const OutageTarget& ot,
                                                  const SirThresholds& th,
                                                  const TrialPlan& plan,
                                                  const SimRegion& region,
                                                  const PathLoss& pl, double rel_tol = 0.02,
                                                  int threads = 0) {
    validate(ot);
    validate(th);
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0))
        throw std::invalid_argument("estimate_density_at_outage: rel_tol must lie in (0, 1)");
    const DensityInterval di = density_interval_at_outage(ot, th, pl.alpha);
    auto est = [&](double lambda) {
        return estimate_joint_success(lambda, th, plan, region, pl, threads);
    };
    return detail::invert_success_curve(est, 1.0 - ot.eps, 0.5 * di.lambda_lower,
                                        2.0 * di.lambda_upper, rel_tol);
}

// Departure of the joint success probability from the product of its
// marginals, with a conservative standard error for the difference. A
// non-negative gap is the positive-correlation effect the joint lower bound
// builds on.
struct CorrelationDiagnostic {
    double p_joint;
    double p_product;
    double gap;       // p_joint - p_fwd * p_rev
    double sigma_gap; // standard error of the gap
};

inline CorrelationDiagnostic correlation_diagnostic(double lambda, const SirThresholds& th,
                                                    const TrialPlan& plan,
                                                    const SimRegion& region,
                                                    const PathLoss& pl, int threads = 0) {
    const JointEstimates e = estimate_joint_success(lambda, th, plan, region, pl, threads);
    const double sj = e.joint.ci_halfwidth / 1.96;
    const double sf = e.fwd.ci_halfwidth / 1.96;
    const double sr = e.rev.ci_halfwidth / 1.96;
    const double product = e.fwd.p_hat * e.rev.p_hat;
    const double sigma = std::sqrt(sj * sj + e.rev.p_hat * e.rev.p_hat * sf * sf +
                                   e.fwd.p_hat * e.fwd.p_hat * sr * sr);
    return CorrelationDiagnostic{e.joint.p_hat, product, e.joint.p_hat - product, sigma};
}

// ---------------------------------------------------------------------------
// Quantised transmit beamforming
// ---------------------------------------------------------------------------

// How the desired-link power under beamforming is generated. The scaled-gamma
// model draws the full n-antenna coherent gain (sum of n unit exponentials)
// and retains the fraction `gamma`; the RVQ model quantises an explicit
// random channel vector against a random codebook of 2^codebook_bits entries.
struct SignalGainModel {
    enum class Kind { scaled_gamma, rvq_codebook };
    Kind kind = Kind::scaled_gamma;
    double gamma = 1.0;
    int codebook_bits = 0;
};

struct BeamformingFades {
    double desired_power;
    double fb_signal;
    std::vector<double> fwd_interference;
    std::vector<double> fb_interference;
};

struct BeamformingOutcome {
    bool fwd_ok;
    bool fb_ok;
    bool joint_ok;
};

struct BeamformingEstimates {
    TrialEstimate joint;
    TrialEstimate fwd;
    TrialEstimate fb;
};

namespace detail {

struct Cn {
    std::vector<double> re, im;
};

inline void draw_cn(Cn& v, int n, std::mt19937_64& rng) {
    v.re.resize(std::size_t(n));
    v.im.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        const auto [a, b] = gaussian_pair(rng);
        v.re[std::size_t(i)] = a * std::numbers::sqrt2 / 2.0;
        v.im[std::size_t(i)] = b * std::numbers::sqrt2 / 2.0;
    }
}

inline double projection_power(const Cn& h, const Cn& w) {
    double norm = 0.0, dot_re = 0.0, dot_im = 0.0;
    for (std::size_t i = 0; i < h.re.size(); ++i) {
        norm += w.re[i] * w.re[i] + w.im[i] * w.im[i];
        dot_re += h.re[i] * w.re[i] + h.im[i] * w.im[i];
        dot_im += h.im[i] * w.re[i] - h.re[i] * w.im[i];
    }
    return (dot_re * dot_re + dot_im * dot_im) / norm;
}

} // namespace detail

// |<h, b>|^2 for h ~ CN(0, I_n) and an independent uniform unit vector b;
// distributed Exp(1) for every n, which the test suite checks.
inline double projected_fade_power(int n, std::mt19937_64& rng) {
    if (n < 1)
        throw std::invalid_argument("projected_fade_power: n must be >= 1");
    detail::Cn h, w;
    detail::draw_cn(h, n, rng);
    detail::draw_cn(w, n, rng);
    return detail::projection_power(h, w);
}

// Best projection of h ~ CN(0, I_n) onto a fresh random codebook of
// 2^bits unit vectors.
inline double rvq_signal_power(int n, int bits, std::mt19937_64& rng) {
    if (n < 1 || bits < 1 || bits > 24)
        throw std::invalid_argument("rvq_signal_power: need n >= 1 and bits in [1, 24]");
    detail::Cn h, w;
    detail::draw_cn(h, n, rng);
    double best = 0.0;
    const long long entries = 1ll << bits;
    for (long long j = 0; j < entries; ++j) {
        detail::draw_cn(w, n, rng);
        best = std::max(best, detail::projection_power(h, w));
    }
    return best;
}

// Draw order: desired-link power (model-dependent), feedback-link signal
// fade, all forward interferer fades, all feedback interferer fades.
inline BeamformingFades draw_beamforming_fades(std::size_t n_interferers, int n_antennas,
                                               const SignalGainModel& model,
                                               std::mt19937_64& rng) {
    if (n_antennas < 1)
        throw std::invalid_argument("draw_beamforming_fades: n_antennas must be >= 1");
    BeamformingFades f;
    if (model.kind == SignalGainModel::Kind::scaled_gamma) {
        if (!(model.gamma > 0.0) || !(model.gamma <= 1.0))
            throw std::invalid_argument("SignalGainModel: gamma must lie in (0, 1]");
        double sum = 0.0;
        for (int i = 0; i < n_antennas; ++i)
            sum += detail::unit_exponential(rng);
        f.desired_power = model.gamma * sum;
    } else {
        f.desired_power = rvq_signal_power(n_antennas, model.codebook_bits, rng);
    }
    f.fb_signal = detail::unit_exponential(rng);
    f.fwd_interference.reserve(n_interferers);
    f.fb_interference.reserve(n_interferers);
    for (std::size_t i = 0; i < n_interferers; ++i)
        f.fwd_interference.push_back(detail::unit_exponential(rng));
    for (std::size_t i = 0; i < n_interferers; ++i)
        f.fb_interference.push_back(detail::unit_exponential(rng));
    return f;
}

// Success events of one beamforming trial: the beamformed forward link
// against the interfering transmitters, and the reverse-band feedback link
// (received at the typical transmitter) against the interfering receivers.
inline BeamformingOutcome beamforming_trial(const PairSample& sample,
                                            const BeamformingFades& fades, double beta1,
                                            double beta3, const PathLoss& pl) {
    if (sample.tx.size() != fades.fwd_interference.size() ||
        sample.rx.size() != fades.fb_interference.size())
        throw std::invalid_argument("beamforming_trial: sample/fade sizes disagree");
    if (!(beta1 >= 0.0) || !(beta3 >= 0.0))
        throw std::invalid_argument("beamforming_trial: thresholds must be >= 0");
    bool fwd = true;
    if (beta1 > 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sample.tx.size(); ++i)
            acc += detail::pathloss_power(sample.tx[i].x, sample.tx[i].y, pl.alpha) *
                   fades.fwd_interference[i];
        fwd = fades.desired_power > beta1 * acc;
    }
    bool fb = true;
    if (beta3 > 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sample.rx.size(); ++i)
            acc += detail::pathloss_power(sample.rx[i].x - pl.d, sample.rx[i].y, pl.alpha) *
                   fades.fb_interference[i];
        fb = fades.fb_signal > beta3 * acc;
    }
    return BeamformingOutcome{fwd, fb, fwd && fb};
}

inline BeamformingEstimates estimate_beamforming_success(
    double lambda, const SignalGainModel& model, int n_antennas, double beta1, double beta3,
    const TrialPlan& plan, const SimRegion& region, const PathLoss& pl, int threads = 0) {
    detail::require_sim_inputs(lambda, plan, region, pl);
    if (n_antennas < 1)
        throw std::invalid_argument("estimate_beamforming_success: n_antennas must be >= 1");
    struct Tally {
        long long joint = 0, fwd = 0, fb = 0;
    };
    const int nt = detail::resolve_threads(threads, plan.n_trials);
    auto worker = [&](long long t0, long long t1, Tally& slot) {
        PairSample sample;
        Tally local;
        for (long long t = t0; t < t1; ++t) {
            std::mt19937_64 rng(detail::trial_seed(plan.master_seed, std::uint64_t(t)));
            detail::fill_pair_sample(sample, lambda, region.radius, pl.d, rng);
            const BeamformingFades fades =
                draw_beamforming_fades(sample.tx.size(), n_antennas, model, rng);
            const BeamformingOutcome o = beamforming_trial(sample, fades, beta1, beta3, pl);
            local.fwd += o.fwd_ok;
            local.fb += o.fb_ok;
            local.joint += o.joint_ok;
        }
        slot = local;
    };
    const auto slots = detail::run_partitioned<Tally>(plan.n_trials, nt, worker);
    Tally total;
    for (const auto& s : slots) {
        total.joint += s.joint;
        total.fwd += s.fwd;
        total.fb += s.fb;
    }
    return BeamformingEstimates{detail::make_estimate(total.joint, plan.n_trials),
                                detail::make_estimate(total.fwd, plan.n_trials),
                                detail::make_estimate(total.fb, plan.n_trials)};
}

using BeamformingDensityEstimate = detail::InversionResult<BeamformingEstimates>;

// Density at which the simulated beamforming scheme hits the target outage.
// `lambda_guess` seeds the bracket; any positive value works, a nearby
// analytic bound converges fastest.
inline BeamformingDensityEstimate estimate_beamforming_density_at_outage(
    const OutageTarget& ot, const SignalGainModel& model, int n_antennas, double beta1,
    double beta3, const TrialPlan& plan, const SimRegion& region, const PathLoss& pl,
    double lambda_guess, double rel_tol = 0.02, int threads = 0) {
    validate(ot);
    if (!(lambda_guess > 0.0) || !std::isfinite(lambda_guess))
        throw std::invalid_argument(
            "estimate_beamforming_density_at_outage: lambda_guess must be > 0");
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0))
        throw std::invalid_argument(
            "estimate_beamforming_density_at_outage: rel_tol must lie in (0, 1)");
    auto est = [&](double lambda) {
        return estimate_beamforming_success(lambda, model, n_antennas, beta1, beta3, plan,
                                            region, pl, threads);
    };
    return detail::invert_success_curve(est, 1.0 - ot.eps, 0.5 * lambda_guess,
                                        8.0 * lambda_guess, rel_tol);
}

} // namespace twoway
