// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/optimizers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ldplab {

std::string_view to_string(StepKind kind)
{
    switch (kind)
    {
        case StepKind::SgdSqrt: return "sgd-sqrt";
        case StepKind::CsgdPower: return "csgd-power";
        case StepKind::Constant: return "constant";
    }
    return "?";
}

std::string_view to_string(ClipKind kind)
{
    switch (kind)
    {
        case ClipKind::PaperEq5: return "paper-eq5";
        case ClipKind::GeneralC: return "general-C";
        case ClipKind::Constant: return "constant";
    }
    return "?";
}

std::string_view to_string(Method method)
{
    return method == Method::Vanilla ? "vanilla" : "clipped";
}

namespace {

void require_t(std::int64_t t)
{
    if (t < 1)
        throw std::invalid_argument("iterations are 1-based: t must be >= 1, got " +
                                    std::to_string(t));
}

void require_moment_order(double p)
{
    if (!(p > 1.0 && p <= 2.0))
        throw std::invalid_argument("p must lie in (1, 2]");
}

}  // namespace

double step_size(ScheduleSpec const& schedule, std::int64_t t)
{
    require_t(t);
    double const tp1 = static_cast<double>(t) + 1.0;
    switch (schedule.kind)
    {
        case StepKind::SgdSqrt: return schedule.a / std::sqrt(tp1);
        case StepKind::CsgdPower:
            return std::pow(tp1, -schedule.p / (3.0 * schedule.p - 2.0));
        case StepKind::Constant: return schedule.c;
    }
    throw std::invalid_argument("unknown step schedule");
}

double clip_threshold(ClipSpec const& clip, std::int64_t t)
{
    require_t(t);
    return clip_threshold_real(clip, static_cast<double>(t));
}

double clip_threshold_real(ClipSpec const& clip, double t)
{
    if (!(t >= 1.0))
        throw std::invalid_argument("clip_threshold: t must be >= 1");
    double const tp1 = t + 1.0;
    double coeff = 0.0;
    switch (clip.kind)
    {
        case ClipKind::Constant: return clip.value;
        case ClipKind::PaperEq5: coeff = 2.0 * clip.value; break;
        case ClipKind::GeneralC: coeff = clip.value; break;
    }
    if (clip.p == 2.0)
        return coeff * std::sqrt(std::log(tp1));
    return coeff * std::pow(tp1, (2.0 - clip.p) / (6.0 * clip.p - 4.0));
}

double general_clip_burn_in(double G, double C, double p)
{
    require_moment_order(p);
    if (!(G > 0.0) || !(C > 0.0))
        throw std::invalid_argument("G and C must be positive");
    double const ratio = 2.0 * G / C;
    if (p == 2.0)
        // C sqrt(log(t+1)) >= 2G  <=>  t >= exp(4G^2/C^2) - 1
        return std::exp(ratio * ratio) - 1.0;
    // C (t+1)^e >= 2G  <=>  t >= (2G/C)^(1/e) - 1
    return std::pow(ratio, (6.0 * p - 4.0) / (2.0 - p)) - 1.0;
}

bool clip_in_place(std::span<double> g, double gamma)
{
    double const r = norm(g);
    if (r <= gamma)
        return false;
    double const s = gamma / r;
    for (auto& v : g)
        v *= s;
    return true;
}

Vec clip_vector(std::span<double const> g, double gamma)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("clipping threshold must be positive");
    Vec out(g.begin(), g.end());
    clip_in_place(out, gamma);
    return out;
}

bool apply_update(std::span<double> x, std::span<double> g, double alpha,
                  std::optional<double> gamma)
{
    bool clipped = false;
    if (gamma)
        clipped = clip_in_place(g, *gamma);
    axpy(-alpha, g, x);
    return clipped;
}

//---------------------------------------------------------------------------//

void RunConfig::validate() const
{
    if (!oracle)
        throw std::invalid_argument("run config has no oracle");
    if (init_x1.size() != cost().dim())
        throw std::invalid_argument("initial point dimension does not match the cost");
    if (!all_finite(init_x1))
        throw std::invalid_argument("initial point must be finite");
    if (horizon < 1)
        throw std::invalid_argument("horizon T must be >= 1");

    switch (step.kind)
    {
        case StepKind::SgdSqrt:
            if (!(step.a > 0.0))
                throw std::invalid_argument("step coefficient a must be positive");
            // a <= 1/L
            if (step.a * cost().smoothness() > 1.0)
                throw std::invalid_argument("step coefficient a = " + std::to_string(step.a) +
                                            " exceeds 1/L = " +
                                            std::to_string(1.0 / cost().smoothness()));
            break;
        case StepKind::CsgdPower: require_moment_order(step.p); break;
        case StepKind::Constant:
            if (!(step.c > 0.0))
                throw std::invalid_argument("constant step must be positive");
            break;
    }

    if (method == Method::Vanilla && clip)
        throw std::invalid_argument("vanilla SGD takes no clipping schedule");
    if (method == Method::Clipped)
    {
        if (!clip)
            throw std::invalid_argument("clipped SGD requires a clipping schedule");
        if (!(clip->value > 0.0))
            throw std::invalid_argument("clipping coefficient must be positive");
        if (clip->kind != ClipKind::Constant)
            require_moment_order(clip->p);
    }

    for (std::size_t i = 0; i < epsilon_grid.size(); ++i)
    {
        if (!(epsilon_grid[i] > 0.0))
            throw std::invalid_argument("epsilon grid must be positive");
        if (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1]))
            throw std::invalid_argument("epsilon grid must be strictly increasing");
    }
}

bool TrajectoryRecord::exceeds(std::size_t eps_index, std::int64_t t) const
{
    if (diverged)
        return true;
    auto const h = hitting_time.at(eps_index);
    return h == kNever || h > t;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

std::uint64_t fnv_mix(std::uint64_t h, std::span<double const> x)
{
    for (double v : x)
    {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b)
        {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= kFnvPrime;
        }
    }
    return h;
}

}  // namespace

TrajectoryRecord run_trajectory(RunConfig const& config, std::int64_t run_index,
                                RecordMode mode)
{
    Cost const& cost = config.cost();
    Oracle const& oracle = *config.oracle;
    std::size_t const d = cost.dim();
    std::size_t const n_eps = config.epsilon_grid.size();
    bool const full = mode != RecordMode::Lean;

    TrajectoryRecord rec;
    rec.run_index = run_index;
    rec.hitting_time.assign(n_eps, kNever);
    if (full)
    {
        rec.grad_norm_sq.reserve(static_cast<std::size_t>(config.horizon));
        rec.running_min.reserve(static_cast<std::size_t>(config.horizon));
        rec.running_avg.reserve(static_cast<std::size_t>(config.horizon));
    }

    RandomStream stream(config.seed, static_cast<std::uint64_t>(run_index));
    Vec x = config.init_x1;
    Vec grad(d), g(d);
    double fmin = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::uint64_t digest = kFnvOffset;
    std::size_t unhit = n_eps;

    for (std::int64_t t = 1; t <= config.horizon; ++t)
    {
        if (!all_finite(x) || norm(x) > kDivergenceRadius)
        {
            rec.diverged = true;
            rec.diverged_at = t;
            break;
        }
        digest = fnv_mix(digest, x);
        if (mode == RecordMode::Iterates)
            rec.iterates.push_back(x);

        cost.gradient_into(x, grad);
        double const gn = norm_sq(grad);
        fmin = std::min(fmin, gn);
        sum += gn;
        rec.steps_recorded = t;
        if (full)
        {
            rec.grad_norm_sq.push_back(gn);
            rec.running_min.push_back(fmin);
            rec.running_avg.push_back(sum / static_cast<double>(t));
        }
        // Unhit epsilons always form a prefix of the sorted grid.
        while (unhit > 0 && gn <= config.epsilon_grid[unhit - 1])
        {
            --unhit;
            rec.hitting_time[unhit] = t;
        }

        if (t == config.horizon)
            break;

        oracle.query_into(x, stream, g);
        std::optional<double> gamma;
        if (config.method == Method::Clipped)
            gamma = clip_threshold(*config.clip, t);
        if (apply_update(x, g, step_size(config.step, t), gamma))
            ++rec.clip_events;
    }

    rec.iterate_digest = digest;
    if (rec.steps_recorded > 0)
    {
        rec.final_min = fmin;
        rec.final_avg = sum / static_cast<double>(rec.steps_recorded);
    }
    return rec;
}

}  // namespace ldplab
