// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance driver: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ldplab/cli/commands.hpp"
#include "ldplab/cli/output.hpp"
#include "ldplab/lemmas.hpp"
#include "ldplab/montecarlo.hpp"
#include "ldplab/theory.hpp"

using namespace ldplab;
using namespace ldplab::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

constexpr std::uint64_t kSeed = 0xacce97;

Outcome exact_law()
{
    auto const rows = appendix_f_enumeration(20);
    int exact = 0;
    for (auto const& r : rows)
        exact += r.matches_closed_form && r.probability == std::ldexp(1.0, static_cast<int>(1 - r.t));
    return {exact == 20, fmt::format("{}/20 horizons equal 2^(1-t) exactly", exact)};
}

Outcome lower_bound_monte_carlo()
{
    auto const cfg = preset("appendix-f");
    auto const run = build_run_config(cfg);
    std::int64_t const N = std::int64_t{1} << 20;
    auto const summary = run_ensemble(run, N);
    double const eps = norm_sq(run.init_x1) / 2.0;
    std::vector<std::int64_t> grid;
    for (std::int64_t t = 2; t <= 12; ++t)
        grid.push_back(t);
    auto const tail = estimate_tail(summary, eps, grid);
    double worst = 1e300;
    bool ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        double const half = 0.5 * (tail.ci_high[i] - tail.ci_low[i]);
        double const lb = lower_bound_exact_prob(grid[i]);
        double const margin = (tail.p_hat[i] - (lb - 3.0 * half)) / half;
        worst = std::min(worst, margin);
        ok = ok && tail.p_hat[i] >= lb - 3.0 * half;
    }
    // Valid configs never diverge; a diverged run points at a bug.
    ok = ok && tail.diverged_count == 0;
    return {ok, fmt::format("N=2^20, eps={}, smallest margin {:.2f} half-widths, p_hat(12)={:.3g}, {} diverged",
                            eps, worst, tail.p_hat.back(), tail.diverged_count)};
}

Outcome no_clip_equivalence()
{
    auto const cfg = preset("appendix-f");
    auto vanilla = build_run_config(cfg);
    vanilla.horizon = 100;
    auto clipped = vanilla;
    clipped.method = Method::Clipped;
    clipped.clip = ClipSpec::constant(2.0 * vanilla.cost().grad_bound());
    std::int64_t const N = 100'000;
    auto const a = run_ensemble(vanilla, N);
    auto const b = run_ensemble(clipped, N);
    std::int64_t differ = 0;
    for (std::int64_t r = 0; r < N; ++r)
        differ += a.iterate_digest[static_cast<std::size_t>(r)] !=
                  b.iterate_digest[static_cast<std::size_t>(r)];
    bool const ok = differ == 0 && b.total_clip_events() == 0;
    return {ok, fmt::format("{} runs, T=100: {} differing trajectories, {} clip events", N, differ,
                            b.total_clip_events())};
}

Outcome rate_consistency()
{
    std::vector<RateSpec> const rates{rate_sgd(1.0, 1.0),
                                      rate_csgd(1.0, 1.5),
                                      rate_csgd(1.0, 2.0),
                                      rate_csgd_general(1.0, 1.0, 1.5),
                                      rate_csgd_general(1.0, 1.0, 2.0),
                                      rate_sgd(2.0, 3.0),
                                      rate_csgd(2.0, 1.2),
                                      rate_csgd_general(0.5, 3.0, 2.0)};
    double worst = 0.0;
    for (auto const& r : rates)
        worst = std::max(worst, rate_transform_error(r));
    return {worst <= 1e-3, fmt::format("{} rate functions, worst relative error {:.2e}",
                                       rates.size(), worst)};
}

Outcome suites(std::vector<std::string> const& names, std::size_t samples)
{
    std::size_t checks = 0, passed = 0;
    std::string first_fail;
    for (auto const& name : names)
        for (auto const& row : run_verify_suite(name, samples, kSeed))
        {
            ++checks;
            if (row.pass)
                ++passed;
            else if (first_fail.empty())
                first_fail = fmt::format("; first failure {} / {}: {} > {}", row.suite, row.check,
                                         row.empirical, row.bound);
        }
    return {checks > 0 && passed == checks,
            fmt::format("{}/{} checks pass at {} samples{}", passed, checks, samples, first_fail)};
}

Outcome metric_invariants()
{
    std::int64_t const per_preset = 3334;
    std::int64_t total = 0, violations = 0;
    for (auto const& name : preset_names())
    {
        auto run = build_run_config(preset(name));
        run.horizon = std::min<std::int64_t>(run.horizon, 400);
        auto const recs = run_ensemble_records(run, per_preset, 0, RecordMode::Full);
        for (auto const& r : recs)
        {
            ++total;
            bool ok = true;
            for (std::size_t t = 0; t < r.running_min.size(); ++t)
            {
                if (t > 0 && r.running_min[t] > r.running_min[t - 1])
                    ok = false;
                if (r.running_min[t] > r.running_avg[t] * (1.0 + 1e-12))
                    ok = false;
                for (std::size_t k = 0; k < run.epsilon_grid.size(); ++k)
                    if (r.exceeds(k, static_cast<std::int64_t>(t + 1)) !=
                        (r.running_min[t] > run.epsilon_grid[k]))
                        ok = false;
            }
            violations += !ok;
        }
    }
    return {total >= 10'000 && violations == 0,
            fmt::format("{} trajectories over {} presets, {} with a violation", total,
                        preset_names().size(), violations)};
}

Outcome fit_self_consistency()
{
    std::vector<DecaySequence> const fams{
        {DecayFamily::Sqrt, 2.0},        {DecayFamily::SqrtOverLog, 2.0},
        {DecayFamily::TOverLog, 2.0},    {DecayFamily::TBetaOverLog, 1.5},
        {DecayFamily::TBetaHalfOverLogPow, 1.5}, {DecayFamily::TOverLogSq, 2.0},
        {DecayFamily::Linear, 2.0}};
    std::vector<std::string> names;
    for (auto const& f : fams)
        names.push_back(f.label());

    bool ok = true;
    double worst_rel = 0.0, worst_r2 = 1.0;
    std::string misranked;
    for (std::size_t g = 0; g < fams.size(); ++g)
    {
        std::int64_t const t_max = 2000;
        // Exponent reaches about 10 at the end of the grid.
        double const c = 10.0 / fams[g](static_cast<double>(t_max));
        TailEstimate tail;
        tail.num_runs = std::int64_t{1} << 50;
        tail.epsilon = 1.0;
        for (std::int64_t t = 3; t <= t_max; t += 7)
        {
            double const p = std::exp(-c * fams[g](static_cast<double>(t)));
            tail.t_grid.push_back(t);
            tail.p_hat.push_back(p);
            tail.exceed_count.push_back(
                static_cast<std::int64_t>(std::llround(p * static_cast<double>(tail.num_runs))));
        }
        auto const fits = fit_decay(tail, fams, names);
        double const rel = std::abs(fits[g].slope_hat - c) / c;
        worst_rel = std::max(worst_rel, rel);
        worst_r2 = std::min(worst_r2, fits[g].r_squared);
        ok = ok && rel <= 0.01 && fits[g].r_squared >= 0.9999;
        for (std::size_t k = 0; k < fits.size(); ++k)
            if (k != g && fits[k].r_squared >= fits[g].r_squared)
            {
                ok = false;
                misranked += fmt::format(" {}<={}", names[g], names[k]);
            }
    }
    return {ok, fmt::format("{} families, worst slope error {:.2e}, worst R^2 {:.8f}{}",
                            fams.size(), worst_rel, worst_r2,
                            misranked.empty() ? "" : "; misranked:" + misranked)};
}

Outcome reproducibility()
{
    auto const base = fs::temp_directory_path() / "ldplab_acceptance_repro";
    fs::remove_all(base);
    std::vector<std::string> outputs;
    std::ostringstream log;
    for (unsigned workers : {1u, 2u, 4u})
    {
        for (int rep = 0; rep < 2; ++rep)
        {
            GlobalOptions o;
            o.preset = "appendix-f";
            o.runs = 1 << 16;
            o.workers = workers;
            o.out = (base / fmt::format("w{}_{}", workers, rep)).string();
            if (cmd_simulate(o, log) != kExitOk)
                return {false, "simulate failed"};
            TailOptions t;
            t.epsilon = 0.32;
            o.preset.reset();
            if (cmd_tail(o, t, log) != kExitOk)
                return {false, "tail failed"};
            outputs.push_back(read_file(fs::path(*o.out) / "trajsummary.csv") +
                              read_file(fs::path(*o.out) / "tail.csv"));
        }
    }
    int differ = 0;
    for (auto const& s : outputs)
        differ += s != outputs.front();
    fs::remove_all(base);
    return {differ == 0,
            fmt::format("{} simulations at workers 1, 2, 4: {} differ from the first",
                        outputs.size(), differ)};
}

}  // namespace

int main()
{
    struct Criterion
    {
        int id;
        std::string name;
        double budget_s;
        std::function<Outcome()> body;
    };
    std::size_t const samples = 1'000'000;
    std::vector<Criterion> const criteria{
        {1, "exact stuck-probability law", 1, exact_law},
        {2, "lower-bound Monte Carlo", 60, lower_bound_monte_carlo},
        {3, "no-clip equivalence", 30, no_clip_equivalence},
        {4, "rate-function transforms", 5, rate_consistency},
        {5, "bounded-noise mgf bounds", 60,
         [&] { return suites({"mgf-bounded", "mgf-inner"}, samples); }},
        {6, "clipping bias and sub-Gaussian margin", 120,
         [&] { return suites({"clip-bias", "clip-subgauss"}, samples); }},
        {7, "subsampling noise bound", 30, [&] { return suites({"batch-bound"}, samples); }},
        {8, "schedule spot checks", 1, [&] { return suites({"schedules"}, samples); }},
        {9, "metric invariants", 60, metric_invariants},
        {10, "decay-fit self-consistency", 5, fit_self_consistency},
        {11, "reproducibility across workers", 60, reproducibility},
    };

    int failures = 0;
    for (auto const& c : criteria)
    {
        auto const start = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = c.body();
        }
        catch (std::exception const& e)
        {
            out = {false, std::string("exception: ") + e.what()};
        }
        double const secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !out.pass;
        fmt::print("{} {:>2} {:<40} {:7.2f}s (budget {}s)  {}\n", out.pass ? "PASS" : "FAIL", c.id,
                   c.name, secs, c.budget_s, out.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
