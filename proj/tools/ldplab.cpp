// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldplab/cli/commands.hpp"

using namespace ldplab::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Tail-probability experiments for SGD and clipped SGD"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    GlobalOptions g;
    std::string config, preset_name, out;
    std::uint64_t seed = 0;
    std::int64_t runs = 0;
    app.add_option("--config", config, "experiment config (YAML)");
    app.add_option("--preset", preset_name, "built-in config: appendix-f, sgd-bounded, csgd-pareto");
    app.add_option("--seed", seed, "override ensemble.seed");
    app.add_option("--runs", runs, "override ensemble.N");
    app.add_option("--workers", g.workers, "worker threads (0 = all cores)");
    app.add_option("--out", out, "results directory (default: $LDPLAB_OUT or output.directory)");
    app.add_flag("--force", g.force, "overwrite results from a different config");

    auto* sim = app.add_subcommand("simulate", "run the ensemble and write trajsummary.csv");

    TailOptions tail_opts;
    double tail_eps = 0.0;
    auto* tail = app.add_subcommand("tail", "estimate P(F_t > eps) from a results directory");
    tail->add_option("--epsilon", tail_eps, "threshold (must be in the simulated grid)");
    tail->add_option("--t-grid", tail_opts.t_grid, "iterations to report")->delimiter(',');

    FitOptions fit_opts;
    std::string fit_tail;
    double fit_p = 0.0;
    auto* fit = app.add_subcommand("fit", "fit log p_hat against candidate decay rates");
    fit->add_option("--tail", fit_tail, "tail.csv to fit (default: <results>/tail.csv)");
    fit->add_option("--candidates", fit_opts.candidates, "decay families")->delimiter(',');
    fit->add_option("--candidate-p", fit_p, "p for the beta_p families");

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "run the built-in verification suites");
    verify->add_option("suite", verify_opts.suite, "all or one suite name");
    verify->add_option("--samples", verify_opts.samples, "Monte Carlo samples per check");
    verify->add_option("--verify-seed", verify_opts.seed, "seed for the verification streams");

    CurveOptions curve_opts;
    auto* rates = app.add_subcommand("rates", "export theory decay rates and slopes");
    rates->add_option("--epsilon", curve_opts.epsilon, "threshold for the slope column");
    rates->add_option("--t-grid", curve_opts.t_grid, "iterations (>= 3)")->delimiter(',');
    auto* sota = app.add_subcommand("compare-sota", "compare decay rates with earlier bounds");
    sota->add_option("--epsilon", curve_opts.epsilon, "threshold for the slope column");
    sota->add_option("--t-grid", curve_opts.t_grid, "iterations (>= 3)")->delimiter(',');

    auto* report = app.add_subcommand("report", "tables and charts for every simulated epsilon");

    for (auto* sub : {sim, tail, fit, verify, rates, sota, report})
        sub->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (app.count("--config"))
        g.config_path = config;
    if (app.count("--preset"))
        g.preset = preset_name;
    if (app.count("--seed"))
        g.seed = seed;
    if (app.count("--runs"))
        g.runs = runs;
    if (app.count("--out"))
        g.out = out;
    if (tail->count("--epsilon"))
        tail_opts.epsilon = tail_eps;
    if (fit->count("--tail"))
        fit_opts.tail_csv = fit_tail;
    if (fit->count("--candidate-p"))
        fit_opts.candidate_p = fit_p;

    return guarded(
        [&]() -> int {
            if (*sim)
                return cmd_simulate(g, std::cout);
            if (*tail)
                return cmd_tail(g, tail_opts, std::cout);
            if (*fit)
                return cmd_fit(g, fit_opts, std::cout);
            if (*verify)
                return cmd_verify(g, verify_opts, std::cout);
            if (*rates)
                return cmd_rates(g, curve_opts, std::cout);
            if (*sota)
                return cmd_compare_sota(g, curve_opts, std::cout);
            return cmd_report(g, std::cout);
        },
        std::cerr);
}
