// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "ldplab/errors.hpp"
#include "ldplab/montecarlo.hpp"

namespace ldplab {
namespace {

TEST(ParallelFor, VisitsEveryIndexOnce)
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, 3, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)]++; });
    for (auto const& h : hits)
        ASSERT_EQ(h.load(), 1);
}

TEST(ParallelFor, PropagatesExceptions)
{
    EXPECT_THROW(parallel_for(100, 2,
                              [](std::int64_t i) {
                                  if (i == 57)
                                      throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(Wilson, Values)
{
    auto check = [](std::int64_t k, std::int64_t n, double lo, double hi) {
        auto const [a, b] = wilson_interval(k, n);
        EXPECT_NEAR(a, lo, 1e-14) << k << "/" << n;
        EXPECT_NEAR(b, hi, 1e-14) << k << "/" << n;
    };
    check(10, 100, 0.0552291370606751, 0.17436566150491345);
    check(0, 50, 0.0, 0.07134759913335872);
    check(50, 50, 0.9286524008666414, 1.0);
    check(1, 1000, 0.00017654637062607809, 0.0056425585979579355);
}

RunConfig appendix_config(std::int64_t T, std::uint64_t seed)
{
    RunConfig c;
    c.oracle = std::make_shared<Oracle const>(
        Oracle::additive(huber_cost(1.0, 2), NoiseModel::two_point({0.48, 0.64})));
    c.init_x1 = {0.48, 0.64};
    c.horizon = T;
    c.step = ScheduleSpec::sgd_sqrt(0.5);
    c.seed = seed;
    c.epsilon_grid = {0.05, 0.16, 0.32};
    return c;
}

TEST(Ensemble, SingleRunMatchesTrajectory)
{
    auto const c = appendix_config(40, 17);
    auto const s = run_ensemble(c, 1, 1);
    auto const r = run_trajectory(c, 0, RecordMode::Lean);
    EXPECT_EQ(s.iterate_digest[0], r.iterate_digest);
    for (std::size_t k = 0; k < 3; ++k)
        EXPECT_EQ(s.hit(0, k), r.hitting_time[k]);
    EXPECT_EQ(s.final_min[0], r.final_min);
}

TEST(Ensemble, WorkerCountInvariance)
{
    auto const c = appendix_config(30, 5);
    auto const a = run_ensemble(c, 999, 1);
    auto const b = run_ensemble(c, 999, 3);
    EXPECT_EQ(a.iterate_digest, b.iterate_digest);
    EXPECT_EQ(a.hitting_time, b.hitting_time);
    EXPECT_EQ(a.final_avg, b.final_avg);
}

TEST(Tail, NoiselessIsDeterministic)
{
    auto c = appendix_config(7, 1);
    c.oracle = std::make_shared<Oracle const>(Oracle::noiseless(huber_cost(1.0, 2)));
    c.epsilon_grid = {0.1};
    auto const s = run_ensemble(c, 20, 2);
    std::vector<std::int64_t> const grid{1, 2, 3, 4, 5, 6, 7};
    auto const tail = estimate_tail(s, 0.1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        EXPECT_EQ(tail.exceed_count[i], grid[i] < 4 ? 20 : 0);
        EXPECT_LE(tail.ci_low[i], tail.p_hat[i]);
        EXPECT_GE(tail.ci_high[i], tail.p_hat[i]);
    }
}

TEST(Tail, AppendixInstanceAboveLowerBound)
{
    auto const c = appendix_config(12, 8);
    auto const s = run_ensemble(c, 20000, 2);
    std::vector<std::int64_t> grid;
    for (std::int64_t t = 1; t <= 12; ++t)
        grid.push_back(t);
    auto const tail = estimate_tail(s, 0.32, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        double const lb = std::ldexp(1.0, static_cast<int>(1 - grid[i]));
        double const half = 0.5 * (tail.ci_high[i] - tail.ci_low[i]);
        ASSERT_GE(tail.p_hat[i], lb - 3.0 * half) << grid[i];
        if (i > 0)
            ASSERT_LE(tail.p_hat[i], tail.p_hat[i - 1]);
    }
    EXPECT_EQ(tail.diverged_count, 0);
}

TEST(Tail, Errors)
{
    auto const c = appendix_config(10, 2);
    auto const s = run_ensemble(c, 10, 1);
    std::vector<std::int64_t> const ok{1, 5};
    EXPECT_THROW(estimate_tail(s, 0.2, ok), std::invalid_argument);
    std::vector<std::int64_t> const late{1, 11};
    EXPECT_THROW(estimate_tail(s, 0.32, late), std::invalid_argument);
    std::vector<std::int64_t> const unsorted{5, 1};
    EXPECT_THROW(estimate_tail(s, 0.32, unsorted), std::invalid_argument);
}

TailEstimate synthetic_tail(DecaySequence const& decay, double c, double b,
                            std::int64_t t_max = 200)
{
    TailEstimate t;
    t.num_runs = 1'000'000'000;
    t.epsilon = 1.0;
    for (std::int64_t s = 3; s <= t_max; s += 3)
    {
        double const p = std::exp(b - c * decay(static_cast<double>(s)));
        t.t_grid.push_back(s);
        t.p_hat.push_back(p);
        t.exceed_count.push_back(static_cast<std::int64_t>(std::llround(p * 1e9)));
    }
    return t;
}

TEST(Fit, RecoversGeneratingFamily)
{
    std::vector<DecaySequence> const fams{{DecayFamily::Sqrt, 2.0},
                                          {DecayFamily::TOverLog, 2.0},
                                          {DecayFamily::Linear, 2.0}};
    std::vector<std::string> const names{"sqrt", "t-over-log", "linear"};
    auto const tail = synthetic_tail(fams[1], 0.05, -0.5);
    auto const fits = fit_decay(tail, fams, names);
    ASSERT_EQ(fits.size(), 3u);
    EXPECT_NEAR(fits[1].slope_hat, 0.05, 0.05 * 1e-6);
    EXPECT_NEAR(fits[1].intercept, -0.5, 1e-6);
    EXPECT_GT(fits[1].r_squared, 0.999999);
    EXPECT_GT(fits[1].r_squared, fits[0].r_squared);
    EXPECT_GT(fits[1].r_squared, fits[2].r_squared);
}

TEST(Fit, DropsSparseTail)
{
    DecaySequence const lin{DecayFamily::Linear, 2.0};
    auto tail = synthetic_tail(lin, 0.1, 0.0, 30);
    for (std::size_t i = 0; i < tail.t_grid.size(); ++i)
        if (tail.t_grid[i] > 9)
            tail.exceed_count[i] = 29;
    std::vector<DecaySequence> const fams{lin};
    std::vector<std::string> const names{"linear"};
    auto const fits = fit_decay(tail, fams, names);
    EXPECT_EQ(fits[0].points_used, 3);
    tail.exceed_count[2] = 0;
    EXPECT_THROW(fit_decay(tail, fams, names), InsufficientData);
}

TEST(Enumeration, StuckProbabilityIsExact)
{
    auto const rows = appendix_f_enumeration(16);
    ASSERT_EQ(rows.size(), 16u);
    for (auto const& r : rows)
    {
        EXPECT_TRUE(r.matches_closed_form) << r.t;
        EXPECT_EQ(r.numerator, 1u);
        EXPECT_EQ(r.probability, std::ldexp(1.0, static_cast<int>(1 - r.t)));
    }
}

TEST(Enumeration, ClippedAtTwoGIsIdentical)
{
    TwoAtomInstance inst;
    inst.clip = ClipSpec::constant(2.0);
    auto const rows = appendix_f_enumeration(12, inst);
    for (auto const& r : rows)
        EXPECT_TRUE(r.matches_closed_form);
    EXPECT_THROW(appendix_f_enumeration(25), std::invalid_argument);
}

}  // namespace
}  // namespace ldplab
