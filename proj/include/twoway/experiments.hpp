// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twoway/allocation.hpp"
#include "twoway/analytic.hpp"
#include "twoway/feedback.hpp"
#include "twoway/montecarlo.hpp"
#include "twoway/types.hpp"

namespace twoway {

// Raised for every malformed or inconsistent configuration; the message names
// the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The single swept quantity of an experiment; every other parameter is held
// fixed by the config.
enum class SweepAxis { eps, lambda, f_tr, b_fb };

struct ExperimentConfig {
    PathLoss path_loss{};
    TrafficSpec traffic{};
    BandwidthSplit bandwidth{};
    std::optional<OutageTarget> outage;
    std::optional<FeedbackSpec> feedback;
    std::optional<AntennaConfig> antennas;
    SweepAxis axis = SweepAxis::eps;
    std::vector<double> grid;
    TrialPlan trials{20000, 1};
    double region_radius = 0.0; // 0 selects the default 20 * d
    double rel_tol = 0.02;
    std::string scenario;
    std::string output;
    std::string comment;

    SimRegion region() const {
        return region_radius > 0.0 ? SimRegion{region_radius} : default_region(path_loss);
    }
};

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& j, const char* ctx,
                                    const char* key) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(ctx) + "." + key + ": missing");
    return *it;
}

inline double get_number(const nlohmann::json& j, const char* ctx, const char* key) {
    const auto& v = member(j, ctx, key);
    if (!v.is_number())
        throw ConfigError(std::string(ctx) + "." + key + ": expected a number");
    return v.get<double>();
}

inline double get_number_or(const nlohmann::json& j, const char* ctx, const char* key,
                            double fallback) {
    if (j.find(key) == j.end())
        return fallback;
    return get_number(j, ctx, key);
}

template <class Fn>
void checked(const char* ctx, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        throw ConfigError(std::string(ctx) + ": " + e.what());
    }
}

inline std::vector<double> get_grid(const nlohmann::json& sweep, const char* key) {
    const auto& v = member(sweep, "sweep", key);
    if (!v.is_array() || v.empty())
        throw ConfigError(std::string("sweep.") + key + ": expected a non-empty array");
    std::vector<double> grid;
    grid.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            throw ConfigError(std::string("sweep.") + key + ": expected numbers");
        grid.push_back(e.get<double>());
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]))
            throw ConfigError(std::string("sweep.") + key + ": values must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ConfigError(std::string("sweep.") + key + ": values must be strictly increasing");
    }
    return grid;
}

// Shortest round-trip decimal form, locale independent; the per-byte output
// determinism of every command rests on this.
inline std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("config: expected a JSON object");
    ExperimentConfig cfg;

    const auto& pl = detail::member(j, "config", "path_loss");
    cfg.path_loss = PathLoss{detail::get_number(pl, "path_loss", "alpha"),
                             detail::get_number(pl, "path_loss", "d")};
    detail::checked("path_loss", [&] { validate(cfg.path_loss); });

    const auto& tr = detail::member(j, "config", "traffic");
    cfg.traffic = TrafficSpec{detail::get_number(tr, "traffic", "b_tr"),
                              detail::get_number(tr, "traffic", "b_rt")};
    detail::checked("traffic", [&] { validate(cfg.traffic); });

    const auto& bw = detail::member(j, "config", "bandwidth");
    cfg.bandwidth = BandwidthSplit{detail::get_number(bw, "bandwidth", "f_total"),
                                   detail::get_number(bw, "bandwidth", "f_tr")};
    detail::checked("bandwidth", [&] { validate(cfg.bandwidth); });

    if (const auto it = j.find("outage"); it != j.end()) {
        cfg.outage = OutageTarget{detail::get_number(*it, "outage", "eps")};
        detail::checked("outage", [&] { validate(*cfg.outage); });
    }
    if (const auto it = j.find("feedback"); it != j.end()) {
        cfg.feedback = FeedbackSpec{detail::get_number(*it, "feedback", "b_fb"),
                                    detail::get_number_or(*it, "feedback", "c3", 0.5)};
        detail::checked("feedback", [&] { validate(*cfg.feedback); });
    }
    if (const auto it = j.find("antennas"); it != j.end()) {
        const double n = detail::get_number(*it, "antennas", "n");
        if (n != double(int(n)))
            throw ConfigError("antennas.n: expected an integer");
        cfg.antennas = AntennaConfig{int(n)};
        detail::checked("antennas", [&] { validate(*cfg.antennas); });
    }

    const auto& sweep = detail::member(j, "config", "sweep");
    if (!sweep.is_object())
        throw ConfigError("sweep: expected an object");
    int axes = 0;
    if (sweep.contains("eps_grid")) {
        cfg.axis = SweepAxis::eps;
        cfg.grid = detail::get_grid(sweep, "eps_grid");
        for (double e : cfg.grid)
            if (!(e > 0.0) || !(e < 1.0))
                throw ConfigError("sweep.eps_grid: values must lie in (0, 1)");
        ++axes;
    }
    if (sweep.contains("lambda_grid")) {
        cfg.axis = SweepAxis::lambda;
        cfg.grid = detail::get_grid(sweep, "lambda_grid");
        for (double l : cfg.grid)
            if (!(l >= 0.0))
                throw ConfigError("sweep.lambda_grid: values must be >= 0");
        ++axes;
    }
    if (sweep.contains("f_tr_grid")) {
        cfg.axis = SweepAxis::f_tr;
        cfg.grid = detail::get_grid(sweep, "f_tr_grid");
        for (double f : cfg.grid)
            if (!(f > 0.0) || !(f < cfg.bandwidth.f_total))
                throw ConfigError("sweep.f_tr_grid: values must lie in (0, f_total)");
        ++axes;
    }
    if (sweep.contains("b_fb_grid")) {
        cfg.axis = SweepAxis::b_fb;
        cfg.grid = detail::get_grid(sweep, "b_fb_grid");
        for (double b : cfg.grid)
            if (!(b > 0.0))
                throw ConfigError("sweep.b_fb_grid: values must be > 0");
        ++axes;
    }
    if (axes != 1)
        throw ConfigError("sweep: exactly one of eps_grid, lambda_grid, f_tr_grid, "
                          "b_fb_grid is required");

    if (const auto it = j.find("simulation"); it != j.end()) {
        const double n = detail::get_number_or(*it, "simulation", "n_trials",
                                               double(cfg.trials.n_trials));
        if (!(n >= 1.0) || n != double((long long)(n)))
            throw ConfigError("simulation.n_trials: expected a positive integer");
        cfg.trials.n_trials = (long long)(n);
        const double seed = detail::get_number_or(*it, "simulation", "master_seed",
                                                  double(cfg.trials.master_seed));
        if (!(seed >= 0.0) || seed != double((std::uint64_t)(seed)))
            throw ConfigError("simulation.master_seed: expected a non-negative integer");
        cfg.trials.master_seed = (std::uint64_t)(seed);
        if (it->contains("radius")) {
            cfg.region_radius = detail::get_number(*it, "simulation", "radius");
            if (!(cfg.region_radius > 0.0) || !std::isfinite(cfg.region_radius))
                throw ConfigError("simulation.radius: must be finite and > 0");
            if (cfg.region_radius < 20.0 * cfg.path_loss.d)
                throw ConfigError("simulation.radius: must be at least 20 * path_loss.d");
        }
        cfg.rel_tol = detail::get_number_or(*it, "simulation", "rel_tol", cfg.rel_tol);
        if (!(cfg.rel_tol > 0.0) || !(cfg.rel_tol < 1.0))
            throw ConfigError("simulation.rel_tol: must lie in (0, 1)");
    }

    if (const auto it = j.find("scenario"); it != j.end()) {
        if (!it->is_string())
            throw ConfigError("scenario: expected a string");
        cfg.scenario = it->get<std::string>();
    }
    if (const auto it = j.find("output"); it != j.end()) {
        if (!it->is_string())
            throw ConfigError("output: expected a string");
        cfg.output = it->get<std::string>();
    }
    if (const auto it = j.find("comment"); it != j.end()) {
        if (!it->is_string())
            throw ConfigError("comment: expected a string");
        cfg.comment = it->get<std::string>();
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
    return parse_config(j);
}

namespace detail {

inline void require_axis(const ExperimentConfig& cfg, std::initializer_list<SweepAxis> ok,
                         const char* cmd, const char* expected) {
    for (SweepAxis a : ok)
        if (cfg.axis == a)
            return;
    throw ConfigError(std::string(cmd) + ": requires a " + expected + " sweep");
}

inline const OutageTarget& require_outage(const ExperimentConfig& cfg, const char* cmd) {
    if (!cfg.outage)
        throw ConfigError(std::string(cmd) + ": outage.eps is required");
    return *cfg.outage;
}

inline const FeedbackSpec& require_feedback(const ExperimentConfig& cfg, const char* cmd) {
    if (!cfg.feedback)
        throw ConfigError(std::string(cmd) + ": feedback.b_fb is required");
    return *cfg.feedback;
}

inline const AntennaConfig& require_antennas(const ExperimentConfig& cfg, const char* cmd) {
    if (!cfg.antennas)
        throw ConfigError(std::string(cmd) + ": antennas.n is required");
    return *cfg.antennas;
}

struct CsvWriter {
    std::string text;

    void header(std::initializer_list<const char*> cols) {
        bool first = true;
        for (const char* c : cols) {
            if (!first)
                text += ',';
            text += c;
            first = false;
        }
        text += '\n';
    }
    void row(std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first)
                text += ',';
            text += format_number(v);
            first = false;
        }
        text += '\n';
    }
};

} // namespace detail

// Analytic capacity bracket versus the outage target.
inline std::string cmd_bounds(const ExperimentConfig& cfg) {
    detail::require_axis(cfg, {SweepAxis::eps}, "bounds", "eps_grid");
    detail::CsvWriter csv;
    csv.header({"epsilon", "tc_lower", "tc_upper"});
    for (double eps : cfg.grid) {
        const CapacityInterval ci =
            tc_interval(OutageTarget{eps}, cfg.traffic, cfg.bandwidth, cfg.path_loss);
        csv.row({eps, ci.lower, ci.upper});
    }
    return csv.text;
}

// Monte Carlo success probabilities over a density grid, or simulated
// contention density over an outage grid. In density mode tc_mc is the
// realised capacity p_joint * lambda * (b_tr + b_rt) / f_total; in outage
// mode it is (1 - eps) * lambda_hat * (b_tr + b_rt) / f_total and the ci
// column refers to lambda_hat.
inline std::string cmd_simulate(const ExperimentConfig& cfg, int threads = 0) {
    detail::require_axis(cfg, {SweepAxis::lambda, SweepAxis::eps}, "simulate",
                         "lambda_grid or eps_grid");
    const SirThresholds th = sir_thresholds(cfg.traffic, cfg.bandwidth, cfg.path_loss);
    const SimRegion region = cfg.region();
    const double rate = (cfg.traffic.b_tr + cfg.traffic.b_rt) / cfg.bandwidth.f_total;
    detail::CsvWriter csv;
    if (cfg.axis == SweepAxis::lambda) {
        csv.header({"lambda", "p_joint", "p_fwd", "p_rev", "ci", "tc_mc"});
        for (double lambda : cfg.grid) {
            const JointEstimates e =
                estimate_joint_success(lambda, th, cfg.trials, region, cfg.path_loss, threads);
            csv.row({lambda, e.joint.p_hat, e.fwd.p_hat, e.rev.p_hat, e.joint.ci_halfwidth,
                     e.joint.p_hat * lambda * rate});
        }
    } else {
        csv.header({"epsilon", "p_joint", "p_fwd", "p_rev", "ci", "tc_mc"});
        for (double eps : cfg.grid) {
            const DensityEstimate de =
                estimate_density_at_outage(OutageTarget{eps}, th, cfg.trials, region,
                                           cfg.path_loss, cfg.rel_tol, threads);
            csv.row({eps, de.at_lambda.joint.p_hat, de.at_lambda.fwd.p_hat,
                     de.at_lambda.rev.p_hat, de.lambda_ci_halfwidth,
                     (1.0 - eps) * de.lambda_hat * rate});
        }
    }
    return csv.text;
}

// Split optimisation: the capacity lower bound as the forward band sweeps the
// grid, plus the optimal and proportional splits (constant per config,
// repeated on every row).
inline std::string cmd_allocate(const ExperimentConfig& cfg) {
    detail::require_axis(cfg, {SweepAxis::f_tr}, "allocate", "f_tr_grid");
    const OutageTarget& ot = detail::require_outage(cfg, "allocate");
    const AllocationProblem prob =
        allocation_problem(cfg.traffic, cfg.bandwidth.f_total, cfg.path_loss);
    const double x_prop = proportional_split(prob);
    double x_star = x_prop;
    double gain = 0.0;
    if (cfg.traffic.b_rt > 0.0) {
        const AllocationResult r = optimal_split(prob);
        x_star = r.f_tr_star;
        gain = r.gain_vs_proportional;
    }
    detail::CsvWriter csv;
    csv.header({"f_tr", "tc_lower", "x_star", "x_prop", "gain"});
    for (double f : cfg.grid) {
        const BandwidthSplit sp{cfg.bandwidth.f_total, f};
        const CapacityInterval ci = tc_interval(ot, cfg.traffic, sp, cfg.path_loss);
        csv.row({f, ci.lower, x_star, x_prop, gain});
    }
    return csv.text;
}

// Quantised-beamforming capacity bound against the genie one-way reference,
// plus a Monte Carlo estimate of the achieved capacity, swept over either the
// outage target or the feedback budget.
inline std::string cmd_feedback(const ExperimentConfig& cfg, int threads = 0) {
    detail::require_axis(cfg, {SweepAxis::eps, SweepAxis::b_fb}, "feedback",
                         "eps_grid or b_fb_grid");
    const FeedbackSpec& fs_base = detail::require_feedback(cfg, "feedback");
    const AntennaConfig& ac = detail::require_antennas(cfg, "feedback");
    const SimRegion region = cfg.region();
    const double delta = cfg.path_loss.delta();
    const double c1 = interference_constant_lower(cfg.path_loss.alpha);
    const double f1 = beamforming_signal_factor(ac, cfg.path_loss.alpha);
    const double beta1 = sir_threshold(cfg.traffic.b_tr, cfg.bandwidth.f_tr, cfg.path_loss);

    auto simulate_point = [&](const OutageTarget& ot, const FeedbackSpec& fs) {
        const double gamma = quantization_gain(fs, ac);
        const double beta3_sim = feedback_threshold(fs, cfg.bandwidth.f_rt(), cfg.path_loss,
                                                    FeedbackSirForm::mi_consistent);
        // first-order outage inverse of the simulated model; only the bracket
        // seed, the inverter corrects any residual error
        const double lambda_guess =
            -std::log1p(-ot.eps) /
            (c1 * (f1 * std::pow(beta1 / gamma, delta) + std::pow(beta3_sim, delta)));
        SignalGainModel model;
        model.gamma = gamma;
        const BeamformingDensityEstimate de = estimate_beamforming_density_at_outage(
            ot, model, ac.n, beta1, beta3_sim, cfg.trials, region, cfg.path_loss,
            lambda_guess, cfg.rel_tol, threads);
        return (1.0 - ot.eps) * de.lambda_hat * cfg.traffic.b_tr / cfg.bandwidth.f_total;
    };

    detail::CsvWriter csv;
    if (cfg.axis == SweepAxis::eps) {
        csv.header({"epsilon", "tc_lower_feedback", "tc_oneway_genie", "tc_mc"});
        for (double eps : cfg.grid) {
            const OutageTarget ot{eps};
            const FeedbackBound fb = feedback_tc_lower(ot, cfg.traffic, cfg.bandwidth,
                                                       fs_base, ac, cfg.path_loss);
            const double genie =
                oneway_beamforming_tc(ot, cfg.traffic.b_tr, cfg.bandwidth.f_total,
                                      cfg.bandwidth.f_total, ac, cfg.path_loss);
            csv.row({eps, fb.tc_lower, genie, simulate_point(ot, fs_base)});
        }
    } else {
        const OutageTarget& ot = detail::require_outage(cfg, "feedback");
        const double genie =
            oneway_beamforming_tc(ot, cfg.traffic.b_tr, cfg.bandwidth.f_total,
                                  cfg.bandwidth.f_total, ac, cfg.path_loss);
        csv.header({"B", "tc_lower_feedback", "tc_oneway_genie", "tc_mc"});
        for (double b : cfg.grid) {
            const FeedbackSpec fs{b, fs_base.c3};
            const FeedbackBound fb =
                feedback_tc_lower(ot, cfg.traffic, cfg.bandwidth, fs, ac, cfg.path_loss);
            csv.row({b, fb.tc_lower, genie, simulate_point(ot, fs)});
        }
    }
    return csv.text;
}

} // namespace twoway
