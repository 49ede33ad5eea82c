// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ldplab/costs.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/rng.hpp"

namespace ldplab {

enum class NoiseKind
{
    SphereBounded,      ///< fixed radius times a uniform direction
    TwoPoint,           ///< +v or -v with probability 1/2 each
    SymmetrizedPareto,  ///< Pareto(x_m, index) radius times a uniform direction
    Gaussian,           ///< isotropic, per-coordinate standard deviation `scale`
};

std::string_view to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string_view name);

/// Zero-mean noise generator. The certificate is either an almost-sure norm
/// bound (sphere, two-point) or a p-th moment bound (Pareto, Gaussian).
struct NoiseModel
{
    NoiseKind kind = NoiseKind::SphereBounded;
    std::size_t dim = 1;
    double radius = 0.0;     ///< sphere-bounded
    Vec vector;              ///< two-point atom v
    double x_m = 1.0;        ///< Pareto scale
    double tail_index = 3.0; ///< Pareto shape a
    double moment_p = 2.0;   ///< moment order certified for Pareto
    double scale = 1.0;      ///< Gaussian

    static NoiseModel sphere(std::size_t dim, double radius);
    static NoiseModel two_point(Vec v);
    static NoiseModel pareto(std::size_t dim, double x_m, double tail_index, double p);
    static NoiseModel gaussian(std::size_t dim, double scale);

    /// Throws std::invalid_argument when the parameters are inconsistent
    /// (including a Pareto index <= p, which makes the p-th moment infinite).
    void validate() const;

    /// Almost-sure bound M on |z|, if the model has one.
    std::optional<double> as_bound() const;

    void sample_into(RandomStream& stream, std::span<double> out) const;
};

Vec sample_noise(NoiseModel const& model, RandomStream& stream);

/// Exact E|z|^p for the model. Throws std::invalid_argument if p is outside
/// (1, 2] or the moment is infinite.
double certify_moment(NoiseModel const& model, double p);

enum class OracleMode
{
    AdditiveNoise,
    BatchSubsample,
};

/// Stochastic first-order oracle: either grad f(x) + z or the mean of
/// per-sample gradients over a uniformly drawn index subset.
class Oracle
{
  public:
    static Oracle additive(CostSpec cost, NoiseModel noise);
    static Oracle batch(std::shared_ptr<FiniteSumCost const> cost, std::size_t batch_size);
    /// Exact gradient; equivalent to a sphere-bounded model of radius 0.
    static Oracle noiseless(CostSpec cost);

    OracleMode mode() const { return mode_; }
    Cost const& cost() const { return *cost_; }
    CostSpec const& cost_ptr() const { return cost_; }
    NoiseModel const& noise() const { return noise_; }
    std::size_t batch_size() const { return batch_size_; }
    std::size_t dim() const { return cost_->dim(); }

    Vec query(std::span<double const> x, RandomStream& stream) const;
    void query_into(std::span<double const> x, RandomStream& stream, std::span<double> out) const;

    /// Almost-sure bound on |g - grad f(x)|: M for bounded noise, 2 G_l for
    /// the subsampling oracle.
    std::optional<double> noise_bound() const;

  private:
    Oracle() = default;

    OracleMode mode_ = OracleMode::AdditiveNoise;
    CostSpec cost_;
    std::shared_ptr<FiniteSumCost const> finite_sum_;
    NoiseModel noise_;
    std::size_t batch_size_ = 0;
};

struct ClippingBiasReport
{
    double bias_norm_estimate = 0.0;  ///< |mean(clip(g) - g)|, using E g = grad f
    double bias_standard_error = 0.0; ///< SE of that mean, combined over coordinates
    double bias_bound = 0.0;          ///< 4 sigma^p gamma^(1-p)
    double subgaussian_margin = 0.0;  ///< max_{u,s} log E exp(s<u,theta>) - 3 gamma^2 s^2
    double margin_standard_error = 0.0;
    double worst_scale = 0.0;
    std::size_t num_samples = 0;
};

struct ClippingProbeOptions
{
    std::size_t num_samples = 1'000'000;
    std::size_t num_directions = 8;
    std::uint64_t seed = 0x5eed;
};

/// Monte Carlo check of the clipping bias bound and the sub-Gaussian bound on
/// the centred clipped gradient at a single point. Requires an additive oracle
/// with a finite p-th moment and |grad f(x)| <= gamma / 2, otherwise throws
/// PreconditionViolation.
ClippingBiasReport clipping_bias_probe(Oracle const& oracle, std::span<double const> x,
                                       double gamma, double p,
                                       ClippingProbeOptions const& options = {});

}  // namespace ldplab
