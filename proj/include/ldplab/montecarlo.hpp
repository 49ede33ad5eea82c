// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldplab/optimizers.hpp"
#include "ldplab/theory.hpp"

namespace ldplab {

//---------------------------------------------------------------------------//
// Ensembles
//---------------------------------------------------------------------------//

/// Run fn(i) for i in [0, n) on up to `workers` threads (0 means one per
/// hardware thread). Indices are split into contiguous static chunks.
void parallel_for(std::int64_t n, unsigned workers, std::function<void(std::int64_t)> const& fn);

/// Lean per-run data for a whole ensemble, stored flat in run order.
struct EnsembleSummary
{
    std::string config_digest;
    std::vector<double> epsilon_grid;
    std::int64_t horizon = 0;
    std::int64_t num_runs = 0;

    std::vector<std::int64_t> hitting_time;  ///< num_runs x epsilon_grid.size()
    std::vector<std::uint8_t> diverged;
    std::vector<std::int64_t> clip_events;
    std::vector<std::uint64_t> iterate_digest;
    std::vector<double> final_min;
    std::vector<double> final_avg;

    std::int64_t hit(std::int64_t run, std::size_t eps_index) const
    {
        return hitting_time[static_cast<std::size_t>(run) * epsilon_grid.size() + eps_index];
    }
    std::int64_t total_clip_events() const;
    std::int64_t diverged_count() const;
};

/// N runs with run_index 0..N-1. Results do not depend on `workers`.
EnsembleSummary run_ensemble(RunConfig const& config, std::int64_t num_runs,
                             unsigned workers = 0);

/// Full records (sequences included). Memory grows with N*T, so keep N small.
std::vector<TrajectoryRecord> run_ensemble_records(RunConfig const& config, std::int64_t num_runs,
                                                   unsigned workers = 0,
                                                   RecordMode mode = RecordMode::Full);

//---------------------------------------------------------------------------//
// Tails and fits
//---------------------------------------------------------------------------//

inline constexpr double kWilsonZ95 = 1.959963984540054;

/// Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n, double z = kWilsonZ95);

struct TailEstimate
{
    std::string config_digest;
    std::int64_t num_runs = 0;
    double epsilon = 0.0;
    std::vector<std::int64_t> t_grid;
    std::vector<std::int64_t> exceed_count;
    std::vector<double> p_hat;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::int64_t diverged_count = 0;
};

/// P(F_t > eps) from hitting times. eps must be one of the recorded epsilons
/// and t_grid must be sorted within [1, T].
TailEstimate estimate_tail(EnsembleSummary const& summary, double epsilon,
                           std::span<std::int64_t const> t_grid);

struct DecayFit
{
    std::string candidate;
    double slope_hat = 0.0;  ///< c in log p = intercept - c n_t
    double intercept = 0.0;
    double r_squared = 0.0;
    std::int64_t points_used = 0;
};

inline constexpr std::int64_t kMinExceedForFit = 30;

/// Least-squares fit of log p_hat(t) against -n_t for each candidate. Only
/// t >= 3 with exceed_count >= 30 is used; throws InsufficientData if fewer
/// than 3 such points remain.
std::vector<DecayFit> fit_decay(TailEstimate const& tail, std::span<RateSpec const> candidates);

/// Same, with bare decay sequences labelled by `names`.
std::vector<DecayFit> fit_decay(TailEstimate const& tail, std::span<DecaySequence const> decays,
                                std::span<std::string const> names);

//---------------------------------------------------------------------------//
// Exact two-atom enumeration
//---------------------------------------------------------------------------//

/// Huber instance with noise +x1 / -x1 and the a/sqrt(t+1) step.
struct TwoAtomInstance
{
    double G = 1.0;
    Vec x1{0.48, 0.64};
    double a = 0.5;
    std::optional<ClipSpec> clip;
};

struct StuckProbability
{
    std::int64_t t = 0;
    std::uint64_t numerator = 0;  ///< P = numerator / 2^(t-1)
    std::uint64_t escaped_numerator = 0;
    double probability = 0.0;
    bool matches_closed_form = false;  ///< probability == 2^(1-t) exactly
};

/// Exact probability that x_1 = ... = x_t for t = 1..t_max (t_max <= 24),
/// propagating the actual update map over both noise atoms and merging
/// identical states.
std::vector<StuckProbability> appendix_f_enumeration(std::int64_t t_max,
                                                     TwoAtomInstance const& instance = {});

}  // namespace ldplab
