// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldplab {

/// Decay-rate sequences n_t used by the tail bounds (natural log throughout).
enum class DecayFamily
{
    Sqrt,              ///< sqrt(t)
    SqrtOverLog,       ///< sqrt(t) / log t
    TOverLog,          ///< t / log t
    TBetaOverLog,      ///< t^beta_p / log t
    TBetaHalfOverLogPow,  ///< t^(beta_p/2) / log^(2p/(3p-2)) t
    TOverLogSq,        ///< t / log^2 t
    Linear,            ///< t
};

std::string_view to_string(DecayFamily family);
DecayFamily decay_family_from_string(std::string_view name);

/// beta_p = 4(p - 1) / (3p - 2)
double beta_p(double p);

struct DecaySequence
{
    DecayFamily family = DecayFamily::TOverLog;
    double p = 2.0;  ///< only for the beta_p families

    double operator()(double t) const;
    std::string label() const;
};

/// Decay rate n_t plus a rate function of the form I(x) = k x^2 for x >= 0 and
/// +inf for x < 0, generated as the Fenchel-Legendre transform of
/// phi(lambda) = c lambda^2 (lambda >= 0), 0 (lambda < 0), with k = 1/(4c).
struct RateSpec
{
    std::string name;
    DecaySequence decay;
    double rate_coefficient = 0.0;  ///< k
    double phi_coefficient = 0.0;   ///< c
    double M = 0.0, G = 0.0, p = 2.0, C = 0.0;

    double rate(double x) const;
    double decay_rate(double t) const { return decay(t); }
    double phi(double lambda) const;
};

/// Denominators of the clipped-SGD rate function: 768 G^4 for p < 2 and
/// 384 G^4 for p = 2 by default. The alternative swaps the two, for
/// sensitivity runs.
enum class CsgdConstants
{
    Theorem,
    Corollary,
};

/// Vanilla SGD under bounded noise: n_t = t/log t, I(x) = x^2 / (24 M^2 G^2).
RateSpec rate_sgd(double M, double G);

/// Clipped SGD with the 2G-scaled threshold under p-th moment noise.
RateSpec rate_csgd(double G, double p, CsgdConstants constants = CsgdConstants::Theorem);

/// Clipped SGD with a general threshold coefficient C.
RateSpec rate_csgd_general(double G, double C, double p);

/// sup over the lambda grid of x*lambda - phi(lambda), refined by golden-section
/// search between the neighbours of the grid argmax. Grids must be non-empty
/// and sorted.
std::vector<double> fenchel_legendre(std::function<double(double)> const& phi,
                                     std::span<double const> x_grid,
                                     std::span<double const> lambda_grid);

/// P(x_t = ... = x_1) = 2^(1 - t) on the two-point lower-bound instance.
double lower_bound_exact_prob(std::int64_t t);

enum class SotaKind
{
    LiuSgd,
    NguyenCsgd,
    ArmackiNsgd,
};

std::string_view to_string(SotaKind kind);
SotaKind sota_kind_from_string(std::string_view name);

struct SotaParams
{
    std::optional<double> B;       ///< sub-Gaussian noise scale (Liu)
    std::optional<double> sigma;   ///< noise moment scale (Nguyen)
    std::optional<double> delta;   ///< f(x_1) - f_star (Nguyen)
    std::optional<double> L;       ///< smoothness (Nguyen, Armacki)
    std::optional<double> C;       ///< clipping constant (Armacki)
    std::optional<double> p;       ///< moment order (Nguyen)
};

/// Comparison decay rate and the limsup slope (as a function of epsilon) that
/// finite-time high-probability bounds imply.
struct SotaCurve
{
    SotaKind kind;
    DecaySequence decay;
    std::function<double(double)> slope;
};

SotaCurve sota_curve(SotaKind kind, SotaParams const& params);

}  // namespace ldplab
