// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace ldplab {
namespace {

void require_positive(double v, char const* what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_moment_order(double p)
{
    if (!(p > 1.0 && p <= 2.0))
        throw std::invalid_argument("p must lie in (1, 2]");
}

RateSpec quadratic_rate(std::string name, DecaySequence decay, double phi_coefficient)
{
    RateSpec r;
    r.name = std::move(name);
    r.decay = decay;
    r.phi_coefficient = phi_coefficient;
    r.rate_coefficient = 1.0 / (4.0 * phi_coefficient);
    return r;
}

}  // namespace

std::string_view to_string(DecayFamily family)
{
    switch (family)
    {
        case DecayFamily::Sqrt: return "sqrt";
        case DecayFamily::SqrtOverLog: return "sqrt-over-log";
        case DecayFamily::TOverLog: return "t-over-log";
        case DecayFamily::TBetaOverLog: return "tbeta-over-log";
        case DecayFamily::TBetaHalfOverLogPow: return "tbetahalf-over-logpow";
        case DecayFamily::TOverLogSq: return "t-over-log2";
        case DecayFamily::Linear: return "linear";
    }
    return "?";
}

DecayFamily decay_family_from_string(std::string_view name)
{
    for (auto f : {DecayFamily::Sqrt, DecayFamily::SqrtOverLog, DecayFamily::TOverLog,
                   DecayFamily::TBetaOverLog, DecayFamily::TBetaHalfOverLogPow,
                   DecayFamily::TOverLogSq, DecayFamily::Linear})
        if (to_string(f) == name)
            return f;
    throw std::invalid_argument("unknown decay family '" + std::string(name) + "'");
}

double beta_p(double p)
{
    require_moment_order(p);
    return 4.0 * (p - 1.0) / (3.0 * p - 2.0);
}

double DecaySequence::operator()(double t) const
{
    double const lt = std::log(t);
    switch (family)
    {
        case DecayFamily::Sqrt: return std::sqrt(t);
        case DecayFamily::SqrtOverLog: return std::sqrt(t) / lt;
        case DecayFamily::TOverLog: return t / lt;
        case DecayFamily::TBetaOverLog: return std::pow(t, beta_p(p)) / lt;
        case DecayFamily::TBetaHalfOverLogPow:
            return std::pow(t, 0.5 * beta_p(p)) / std::pow(lt, 2.0 * p / (3.0 * p - 2.0));
        case DecayFamily::TOverLogSq: return t / (lt * lt);
        case DecayFamily::Linear: return t;
    }
    throw std::invalid_argument("unknown decay family");
}

std::string DecaySequence::label() const
{
    if (family == DecayFamily::TBetaOverLog || family == DecayFamily::TBetaHalfOverLogPow)
        return fmt::format("{}(p={})", to_string(family), p);
    return std::string(to_string(family));
}

double RateSpec::rate(double x) const
{
    if (x < 0.0)
        return std::numeric_limits<double>::infinity();
    return rate_coefficient * x * x;
}

double RateSpec::phi(double lambda) const
{
    return lambda >= 0.0 ? phi_coefficient * lambda * lambda : 0.0;
}

RateSpec rate_sgd(double M, double G)
{
    require_positive(M, "noise bound M");
    require_positive(G, "gradient bound G");
    auto r = quadratic_rate("sgd", {DecayFamily::TOverLog, 2.0}, 6.0 * M * M * G * G);
    r.M = M;
    r.G = G;
    return r;
}

RateSpec rate_csgd(double G, double p, CsgdConstants constants)
{
    require_positive(G, "gradient bound G");
    require_moment_order(p);
    double const g4 = G * G * G * G;
    bool const heavy = p < 2.0;
    DecaySequence const decay = heavy ? DecaySequence{DecayFamily::TBetaOverLog, p}
                                      : DecaySequence{DecayFamily::TOverLogSq, p};
    // phi = 192 lambda^2 G^4 (p < 2) or 96 lambda^2 G^4 (p = 2)
    double phi = heavy ? 192.0 * g4 : 96.0 * g4;
    if (constants == CsgdConstants::Corollary)
        phi = heavy ? 96.0 * g4 : 192.0 * g4;
    auto r = quadratic_rate(heavy ? "csgd" : "csgd-p2", decay, phi);
    r.G = G;
    r.p = p;
    return r;
}

RateSpec rate_csgd_general(double G, double C, double p)
{
    require_positive(G, "gradient bound G");
    require_positive(C, "clipping coefficient C");
    require_moment_order(p);
    bool const heavy = p < 2.0;
    DecaySequence const decay = heavy ? DecaySequence{DecayFamily::TBetaOverLog, p}
                                      : DecaySequence{DecayFamily::TOverLogSq, p};
    // The 2G-threshold derivation with 4G^2 replaced by C^2.
    double const phi = (heavy ? 48.0 : 24.0) * C * C * G * G;
    auto r = quadratic_rate(heavy ? "csgd-general" : "csgd-general-p2", decay, phi);
    r.G = G;
    r.C = C;
    r.p = p;
    return r;
}

//---------------------------------------------------------------------------//

std::vector<double> fenchel_legendre(std::function<double(double)> const& phi,
                                     std::span<double const> x_grid,
                                     std::span<double const> lambda_grid)
{
    if (x_grid.empty() || lambda_grid.empty())
        throw std::invalid_argument("fenchel_legendre: empty grid");
    if (!std::is_sorted(x_grid.begin(), x_grid.end()) ||
        !std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
        throw std::invalid_argument("fenchel_legendre: grids must be sorted");

    std::vector<double> phi_vals(lambda_grid.size());
    for (std::size_t j = 0; j < lambda_grid.size(); ++j)
    {
        phi_vals[j] = phi(lambda_grid[j]);
        if (!std::isfinite(phi_vals[j]))
            throw std::invalid_argument("fenchel_legendre: phi must be finite on the grid");
    }

    constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
    std::vector<double> out(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i)
    {
        double const x = x_grid[i];
        std::size_t best = 0;
        double best_val = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < lambda_grid.size(); ++j)
        {
            double const v = x * lambda_grid[j] - phi_vals[j];
            if (v > best_val)
            {
                best_val = v;
                best = j;
            }
        }
        // Golden-section refinement on the bracket around the grid argmax.
        double lo = lambda_grid[best > 0 ? best - 1 : best];
        double hi = lambda_grid[best + 1 < lambda_grid.size() ? best + 1 : best];
        auto objective = [&](double l) { return x * l - phi(l); };
        double c = hi - kInvPhi * (hi - lo);
        double d = lo + kInvPhi * (hi - lo);
        double fc = objective(c), fd = objective(d);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it)
        {
            if (fc > fd)
            {
                hi = d;
                d = c;
                fd = fc;
                c = hi - kInvPhi * (hi - lo);
                fc = objective(c);
            }
            else
            {
                lo = c;
                c = d;
                fc = fd;
                d = lo + kInvPhi * (hi - lo);
                fd = objective(d);
            }
        }
        out[i] = std::max({best_val, fc, fd});
    }
    return out;
}

double lower_bound_exact_prob(std::int64_t t)
{
    if (t < 1)
        throw std::invalid_argument("t must be >= 1");
    return std::ldexp(1.0, static_cast<int>(1 - t));
}

//---------------------------------------------------------------------------//

std::string_view to_string(SotaKind kind)
{
    switch (kind)
    {
        case SotaKind::LiuSgd: return "liu-sgd";
        case SotaKind::NguyenCsgd: return "nguyen-csgd";
        case SotaKind::ArmackiNsgd: return "armacki-nsgd";
    }
    return "?";
}

SotaKind sota_kind_from_string(std::string_view name)
{
    for (auto k : {SotaKind::LiuSgd, SotaKind::NguyenCsgd, SotaKind::ArmackiNsgd})
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown comparison curve '" + std::string(name) + "'");
}

namespace {

double need(std::optional<double> const& v, char const* what, SotaKind kind)
{
    if (!v)
        throw std::invalid_argument(fmt::format("{} requires parameter {}", to_string(kind), what));
    if (!(*v > 0.0))
        throw std::invalid_argument(fmt::format("{}: parameter {} must be positive",
                                                to_string(kind), what));
    return *v;
}

}  // namespace

SotaCurve sota_curve(SotaKind kind, SotaParams const& params)
{
    switch (kind)
    {
        case SotaKind::LiuSgd: {
            double const B = need(params.B, "B", kind);
            return {kind, {DecayFamily::Sqrt, 2.0},
                    [B](double eps) { return -eps / (12.0 * B * B); }};
        }
        case SotaKind::NguyenCsgd: {
            double const sigma = need(params.sigma, "sigma", kind);
            double const delta = need(params.delta, "delta", kind);
            double const L = need(params.L, "L", kind);
            double const p = params.p.value_or(2.0);
            require_moment_order(p);
            double const denom = 720.0 * sigma * std::sqrt(delta * L);
            return {kind, {DecayFamily::TBetaHalfOverLogPow, p},
                    [denom](double eps) { return -eps / denom; }};
        }
        case SotaKind::ArmackiNsgd: {
            double const C = need(params.C, "C", kind);
            double const L = need(params.L, "L", kind);
            double const denom = 16.0 * C * C * C * C * L * L;
            return {kind, {DecayFamily::SqrtOverLog, 2.0},
                    [denom](double eps) { return -std::min(eps, std::sqrt(eps)) / denom; }};
        }
    }
    throw std::invalid_argument("unknown comparison curve");
}

}  // namespace ldplab
