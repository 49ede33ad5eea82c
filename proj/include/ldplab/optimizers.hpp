// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ldplab/costs.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/oracles.hpp"

namespace ldplab {

//---------------------------------------------------------------------------//
// Schedules
//---------------------------------------------------------------------------//

enum class StepKind
{
    SgdSqrt,    ///< a / sqrt(t + 1)
    CsgdPower,  ///< (t + 1)^(-p / (3p - 2))
    Constant,   ///< c
};

struct ScheduleSpec
{
    StepKind kind = StepKind::SgdSqrt;
    double a = 1.0;
    double p = 2.0;
    double c = 1.0;

    static ScheduleSpec sgd_sqrt(double a) { return {StepKind::SgdSqrt, a, 2.0, 1.0}; }
    static ScheduleSpec csgd_power(double p) { return {StepKind::CsgdPower, 1.0, p, 1.0}; }
    static ScheduleSpec constant(double c) { return {StepKind::Constant, 1.0, 2.0, c}; }
};

enum class ClipKind
{
    PaperEq5,  ///< 2G (t+1)^((2-p)/(6p-4)), or 2G sqrt(log(t+1)) when p = 2
    GeneralC,  ///< same shape with coefficient C in place of 2G
    Constant,  ///< gamma_t = value
};

struct ClipSpec
{
    ClipKind kind = ClipKind::PaperEq5;
    double p = 2.0;
    double value = 1.0;  ///< G for PaperEq5, C for GeneralC, gamma for Constant

    static ClipSpec paper_eq5(double p, double G) { return {ClipKind::PaperEq5, p, G}; }
    static ClipSpec general(double p, double C) { return {ClipKind::GeneralC, p, C}; }
    static ClipSpec constant(double gamma) { return {ClipKind::Constant, 2.0, gamma}; }
};

std::string_view to_string(StepKind kind);
std::string_view to_string(ClipKind kind);

/// Step size at 1-based iteration t. Throws std::invalid_argument for t < 1.
double step_size(ScheduleSpec const& schedule, std::int64_t t);

/// Clipping threshold at 1-based iteration t (natural logarithm).
double clip_threshold(ClipSpec const& clip, std::int64_t t);

/// Same formula at a real-valued t >= 1.
double clip_threshold_real(ClipSpec const& clip, double t);

/// First iteration from which a general-C threshold is at least 2G, i.e. the
/// point after which the clipping-bias bound applies.
double general_clip_burn_in(double G, double C, double p);

/// Euclidean clipping: g unchanged if |g| <= gamma (ties included), else
/// rescaled to norm exactly gamma.
Vec clip_vector(std::span<double const> g, double gamma);

/// In-place version of clip_vector. Returns true if g was rescaled.
bool clip_in_place(std::span<double> g, double gamma);

//---------------------------------------------------------------------------//
// Runs
//---------------------------------------------------------------------------//

enum class Method
{
    Vanilla,
    Clipped,
};

std::string_view to_string(Method method);

struct RunConfig
{
    Method method = Method::Vanilla;
    std::shared_ptr<Oracle const> oracle;
    Vec init_x1;
    std::int64_t horizon = 1;  ///< T: iterates x_1..x_T are recorded
    ScheduleSpec step;
    std::optional<ClipSpec> clip;
    std::uint64_t seed = 0;
    std::vector<double> epsilon_grid;  ///< sorted, positive

    Cost const& cost() const { return oracle->cost(); }

    /// Throws std::invalid_argument on any inconsistency, including
    /// a > 1/L for the a/sqrt(t+1) schedule.
    void validate() const;
};

/// Sentinel for "not reached within the horizon".
inline constexpr std::int64_t kNever = -1;

/// Per-run statistics. Sequences are only filled in full recording mode.
struct TrajectoryRecord
{
    std::int64_t run_index = 0;
    bool diverged = false;
    std::int64_t diverged_at = kNever;   ///< first iterate index that blew up
    std::int64_t steps_recorded = 0;     ///< number of iterates with a gradient recorded
    std::int64_t clip_events = 0;
    std::vector<std::int64_t> hitting_time;  ///< per epsilon; kNever if not hit
    double final_min = 0.0;              ///< F_T
    double final_avg = 0.0;              ///< A_T
    std::uint64_t iterate_digest = 0;    ///< FNV-1a over the bits of every iterate

    std::vector<double> grad_norm_sq;    ///< |grad f(x_t)|^2, t = 1..T
    std::vector<double> running_min;     ///< F_t
    std::vector<double> running_avg;     ///< A_t
    std::vector<Vec> iterates;           ///< only with RecordMode::Iterates

    /// F_t > eps for the epsilon at index k, judged from the hitting time.
    /// Diverged runs count as exceedances.
    bool exceeds(std::size_t eps_index, std::int64_t t) const;
};

enum class RecordMode
{
    Lean,      ///< hitting times, clip count, final F/A, digest
    Full,      ///< plus per-iterate sequences
    Iterates,  ///< plus the iterates themselves
};

/// Iterates beyond this norm abort the run as diverged.
inline constexpr double kDivergenceRadius = 1e9;

/// One run of vanilla or clipped SGD. The random stream is derived
/// from (config.seed, run_index). Gradients recorded are analytic.
TrajectoryRecord run_trajectory(RunConfig const& config, std::int64_t run_index,
                                RecordMode mode = RecordMode::Full);

/// One update x <- x - alpha * Psi(g). Returns true if clipping was applied.
bool apply_update(std::span<double> x, std::span<double> g, double alpha,
                  std::optional<double> gamma);

}  // namespace ldplab
