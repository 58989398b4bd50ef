// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "twoway/twoway.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long trials = 0;
    bool trials_set = false;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out_path, "output CSV path (overrides config)");
    cmd->add_option("--seed", opt.seed, "override simulation.master_seed")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
    cmd->add_option("--trials", opt.trials, "override simulation.n_trials")
        ->check(CLI::PositiveNumber)
        ->each([&opt](const std::string&) { opt.trials_set = true; });
}

twoway::ExperimentConfig load(const Options& opt) {
    twoway::ExperimentConfig cfg = twoway::load_config(opt.config_path);
    if (opt.seed_set)
        cfg.trials.master_seed = opt.seed;
    if (opt.trials_set)
        cfg.trials.n_trials = opt.trials;
    return cfg;
}

void write_output(const Options& opt, const twoway::ExperimentConfig& cfg,
                  const std::string& csv) {
    const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.output;
    if (path.empty())
        throw twoway::ConfigError("output: give --out or an \"output\" config entry");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << csv;
    if (!out)
        throw std::runtime_error("short write to " + path);
    std::cerr << path << ": " << csv.size() << " bytes\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission capacity of two-way Poisson ad hoc networks"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* bounds = app.add_subcommand("bounds", "analytic capacity bracket over eps");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo success/density estimates");
    CLI::App* allocate =
        app.add_subcommand("allocate", "bandwidth split optimisation sweep");
    CLI::App* feedback =
        app.add_subcommand("feedback", "quantised beamforming bounds and simulation");
    for (CLI::App* cmd : {bounds, simulate, allocate, feedback})
        add_common(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const twoway::ExperimentConfig cfg = load(opt);
        std::string csv;
        if (bounds->parsed())
            csv = twoway::cmd_bounds(cfg);
        else if (simulate->parsed())
            csv = twoway::cmd_simulate(cfg);
        else if (allocate->parsed())
            csv = twoway::cmd_allocate(cfg);
        else
            csv = twoway::cmd_feedback(cfg);
        write_output(opt, cfg, csv);
        return 0;
    } catch (const twoway::SimulationNonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return 3;
    } catch (const twoway::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
