// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ldplab/errors.hpp"
#include "ldplab/optimizers.hpp"

namespace ldplab {

std::string_view to_string(LemmaSuite suite)
{
    switch (suite)
    {
        case LemmaSuite::MgfBounded: return "mgf-bounded";
        case LemmaSuite::MgfInner: return "mgf-inner";
        case LemmaSuite::ClipBias: return "clip-bias";
        case LemmaSuite::ClipSubgauss: return "clip-subgauss";
        case LemmaSuite::BatchBound: return "batch-bound";
    }
    return "?";
}

LemmaSuite lemma_suite_from_string(std::string_view name)
{
    for (auto s : {LemmaSuite::MgfBounded, LemmaSuite::MgfInner, LemmaSuite::ClipBias,
                   LemmaSuite::ClipSubgauss, LemmaSuite::BatchBound})
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown lemma suite '" + std::string(name) + "'");
}

namespace {

struct Welford
{
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;

    void push(double v)
    {
        ++n;
        double const delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
    }
    double standard_error() const
    {
        if (n < 2)
            return 0.0;
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

LemmaCheck judge(std::string label, double empirical, double bound, double se, double slack_se)
{
    LemmaCheck c;
    c.label = std::move(label);
    c.empirical = empirical;
    c.bound = bound;
    c.standard_error = se;
    c.slack = se > 0.0 ? (bound - empirical) / se : bound - empirical;
    // A few ulps of room so that exactly saturated bounds pass.
    double const tol = 1e-12 * std::max(1.0, std::abs(bound));
    c.pass = empirical <= bound + slack_se * se + tol;
    return c;
}

Oracle const& require_oracle(LemmaParams const& params)
{
    if (!params.oracle)
        throw std::invalid_argument("lemma suite needs an oracle");
    if (params.num_samples < 2)
        throw std::invalid_argument("lemma suite needs at least 2 samples");
    return *params.oracle;
}

Vec query_point(LemmaParams const& params, Oracle const& oracle)
{
    if (params.x.empty())
        return Vec(oracle.dim(), 0.0);
    require_dim(params.x, oracle.dim(), "lemma query point");
    return params.x;
}

double bounded_noise_scale(Oracle const& oracle)
{
    if (oracle.mode() != OracleMode::AdditiveNoise)
        throw PreconditionViolation("the sub-Gaussian noise checks need an additive oracle");
    auto const m = oracle.noise().as_bound();
    if (!m || !(*m > 0.0))
        throw PreconditionViolation(
            fmt::format("{} noise has no positive almost-sure bound", to_string(oracle.noise().kind)));
    return *m;
}

LemmaReport mgf_bounded(LemmaParams const& params)
{
    auto const& oracle = require_oracle(params);
    double const M = bounded_noise_scale(oracle);
    RandomStream stream(params.seed, 0);
    Vec z(oracle.dim());
    Welford acc;
    for (std::size_t i = 0; i < params.num_samples; ++i)
    {
        oracle.noise().sample_into(stream, z);
        double const r = norm(z) / M;
        acc.push(std::exp(r * r));
    }
    LemmaReport rep{LemmaSuite::MgfBounded, {}, false};
    rep.checks.push_back(judge(fmt::format("E exp(|z|^2/M^2), M={}", M), acc.mean, std::exp(1.0),
                               acc.standard_error(), params.slack_se));
    rep.pass = rep.checks.back().pass;
    return rep;
}

LemmaReport mgf_inner(LemmaParams const& params)
{
    auto const& oracle = require_oracle(params);
    double const M = bounded_noise_scale(oracle);
    std::size_t const d = oracle.dim();
    std::size_t const n = params.num_samples;
    if (params.inner_norms.empty() || params.num_directions == 0)
        throw std::invalid_argument("mgf-inner needs a norm grid and directions");

    std::vector<double> zs(n * d);
    RandomStream stream(params.seed, 0);
    for (std::size_t i = 0; i < n; ++i)
        oracle.noise().sample_into(stream, std::span<double>(zs.data() + i * d, d));

    LemmaReport rep{LemmaSuite::MgfInner, {}, true};
    RandomStream dir_stream(params.seed, 1);
    Vec u(d), x(d);
    for (std::size_t k = 0; k < params.num_directions; ++k)
    {
        for (auto& v : u)
            v = dir_stream.normal();
        double const un = norm(u);
        for (auto& v : u)
            v /= un;
        for (double nu : params.inner_norms)
        {
            for (std::size_t j = 0; j < d; ++j)
                x[j] = nu / M * u[j];
            Welford acc;
            for (std::size_t i = 0; i < n; ++i)
                acc.push(std::exp(dot(x, std::span<double const>(zs.data() + i * d, d))));
            double const xn = norm(x);
            auto c = judge(fmt::format("dir {} |x|M={}", k, nu), acc.mean,
                           std::exp(0.75 * M * M * xn * xn), acc.standard_error(), params.slack_se);
            rep.pass = rep.pass && c.pass;
            rep.checks.push_back(std::move(c));
        }
    }
    return rep;
}

std::vector<double> clip_gammas(LemmaParams const& params, Oracle const& oracle)
{
    if (!params.general_C)
    {
        if (params.gammas.empty())
            throw std::invalid_argument("clipping checks need at least one gamma");
        return params.gammas;
    }
    double const G = oracle.cost().grad_bound();
    double const burn = general_clip_burn_in(G, *params.general_C, params.p);
    if (static_cast<double>(params.t) < burn)
        throw PreconditionViolation(
            fmt::format("t = {} is below the burn-in {:.6g} for C = {}", params.t, burn,
                        *params.general_C));
    return {clip_threshold(ClipSpec::general(params.p, *params.general_C), params.t)};
}

LemmaReport clipping(LemmaSuite suite, LemmaParams const& params)
{
    auto const& oracle = require_oracle(params);
    Vec const x = query_point(params, oracle);
    LemmaReport rep{suite, {}, true};
    for (double gamma : clip_gammas(params, oracle))
    {
        ClippingProbeOptions opts;
        opts.num_samples = params.num_samples;
        opts.num_directions = params.num_directions;
        opts.seed = params.seed;
        auto const r = clipping_bias_probe(oracle, x, gamma, params.p, opts);
        LemmaCheck c;
        if (suite == LemmaSuite::ClipBias)
            c = judge(fmt::format("bias p={} gamma={}", params.p, gamma), r.bias_norm_estimate,
                      r.bias_bound, r.bias_standard_error, params.slack_se);
        else
            c = judge(fmt::format("subgauss margin p={} gamma={} s={}", params.p, gamma,
                                  r.worst_scale),
                      r.subgaussian_margin, 0.0, r.margin_standard_error, params.slack_se);
        rep.pass = rep.pass && c.pass;
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

LemmaReport batch_bound(LemmaParams const& params)
{
    auto const& oracle = require_oracle(params);
    if (oracle.mode() != OracleMode::BatchSubsample)
        throw PreconditionViolation("batch-bound needs a subsampling oracle");
    Vec const x = query_point(params, oracle);
    double const bound = *oracle.noise_bound();
    Vec const grad = oracle.cost().gradient(x);
    Vec g(oracle.dim());
    RandomStream stream(params.seed, 0);
    double worst = 0.0;
    std::int64_t violations = 0;
    for (std::size_t i = 0; i < params.num_samples; ++i)
    {
        oracle.query_into(x, stream, g);
        double s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            s += (g[k] - grad[k]) * (g[k] - grad[k]);
        double const dev = std::sqrt(s);
        worst = std::max(worst, dev);
        if (dev > bound * (1.0 + 1e-12))
            ++violations;
    }
    LemmaCheck c;
    c.label = fmt::format("|g - grad f| <= 2G_l over {} queries", params.num_samples);
    c.empirical = worst;
    c.bound = bound;
    c.slack = bound - worst;
    c.violations = violations;
    c.pass = violations == 0;
    return {LemmaSuite::BatchBound, {c}, c.pass};
}

}  // namespace

LemmaReport verify_lemma_suite(LemmaSuite suite, LemmaParams const& params)
{
    switch (suite)
    {
        case LemmaSuite::MgfBounded: return mgf_bounded(params);
        case LemmaSuite::MgfInner: return mgf_inner(params);
        case LemmaSuite::ClipBias:
        case LemmaSuite::ClipSubgauss: return clipping(suite, params);
        case LemmaSuite::BatchBound: return batch_bound(params);
    }
    throw std::invalid_argument("unknown lemma suite");
}

}  // namespace ldplab
