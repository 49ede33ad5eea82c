// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ldplab/errors.hpp"
#include "ldplab/optimizers.hpp"

namespace ldplab {

std::string_view to_string(NoiseKind kind)
{
    switch (kind)
    {
        case NoiseKind::SphereBounded: return "sphere-bounded";
        case NoiseKind::TwoPoint: return "two-point";
        case NoiseKind::SymmetrizedPareto: return "symmetrized-pareto";
        case NoiseKind::Gaussian: return "gaussian";
    }
    return "?";
}

NoiseKind noise_kind_from_string(std::string_view name)
{
    for (auto k : {NoiseKind::SphereBounded, NoiseKind::TwoPoint, NoiseKind::SymmetrizedPareto,
                   NoiseKind::Gaussian})
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

NoiseModel NoiseModel::sphere(std::size_t dim, double radius)
{
    NoiseModel m;
    m.kind = NoiseKind::SphereBounded;
    m.dim = dim;
    m.radius = radius;
    m.validate();
    return m;
}

NoiseModel NoiseModel::two_point(Vec v)
{
    NoiseModel m;
    m.kind = NoiseKind::TwoPoint;
    m.dim = v.size();
    m.vector = std::move(v);
    m.validate();
    return m;
}

NoiseModel NoiseModel::pareto(std::size_t dim, double x_m, double tail_index, double p)
{
    NoiseModel m;
    m.kind = NoiseKind::SymmetrizedPareto;
    m.dim = dim;
    m.x_m = x_m;
    m.tail_index = tail_index;
    m.moment_p = p;
    m.validate();
    return m;
}

NoiseModel NoiseModel::gaussian(std::size_t dim, double scale)
{
    NoiseModel m;
    m.kind = NoiseKind::Gaussian;
    m.dim = dim;
    m.scale = scale;
    m.validate();
    return m;
}

void NoiseModel::validate() const
{
    if (dim == 0)
        throw std::invalid_argument("noise dimension must be positive");
    switch (kind)
    {
        case NoiseKind::SphereBounded:
            if (!(radius >= 0.0) || !std::isfinite(radius))
                throw std::invalid_argument("sphere-bounded radius must be finite and >= 0");
            break;
        case NoiseKind::TwoPoint:
            if (vector.size() != dim || !all_finite(vector))
                throw std::invalid_argument("two-point atom must be finite with length dim");
            break;
        case NoiseKind::SymmetrizedPareto:
            if (!(x_m > 0.0) || !std::isfinite(x_m))
                throw std::invalid_argument("Pareto scale x_m must be positive");
            if (!(moment_p > 1.0 && moment_p <= 2.0))
                throw std::invalid_argument("Pareto moment order p must lie in (1, 2]");
            if (!(tail_index > moment_p) || !std::isfinite(tail_index))
                throw std::invalid_argument(
                    "Pareto tail index must exceed p (the p-th moment would be infinite)");
            break;
        case NoiseKind::Gaussian:
            if (!(scale >= 0.0) || !std::isfinite(scale))
                throw std::invalid_argument("Gaussian scale must be finite and >= 0");
            break;
    }
}

std::optional<double> NoiseModel::as_bound() const
{
    switch (kind)
    {
        case NoiseKind::SphereBounded: return radius;
        case NoiseKind::TwoPoint: return norm(vector);
        case NoiseKind::Gaussian:
            if (scale == 0.0)
                return 0.0;
            return std::nullopt;
        case NoiseKind::SymmetrizedPareto: return std::nullopt;
    }
    return std::nullopt;
}

namespace {

void uniform_direction(RandomStream& stream, std::span<double> out)
{
    if (out.size() == 1)
    {
        out[0] = stream.uniform() < 0.5 ? -1.0 : 1.0;
        return;
    }
    double r2 = 0.0;
    do
    {
        for (auto& v : out)
            v = stream.normal();
        r2 = norm_sq(out);
    } while (r2 == 0.0);
    double const inv = 1.0 / std::sqrt(r2);
    for (auto& v : out)
        v *= inv;
}

}  // namespace

void NoiseModel::sample_into(RandomStream& stream, std::span<double> out) const
{
    switch (kind)
    {
        case NoiseKind::SphereBounded:
            if (radius == 0.0)
            {
                std::fill(out.begin(), out.end(), 0.0);
                return;
            }
            uniform_direction(stream, out);
            for (auto& v : out)
                v *= radius;
            return;
        case NoiseKind::TwoPoint: {
            double const sign = stream.uniform() < 0.5 ? 1.0 : -1.0;
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = sign * vector[i];
            return;
        }
        case NoiseKind::SymmetrizedPareto: {
            double const r = x_m * std::pow(stream.uniform(), -1.0 / tail_index);
            uniform_direction(stream, out);
            for (auto& v : out)
                v *= r;
            return;
        }
        case NoiseKind::Gaussian:
            for (auto& v : out)
                v = scale * stream.normal();
            return;
    }
}

Vec sample_noise(NoiseModel const& model, RandomStream& stream)
{
    Vec z(model.dim);
    model.sample_into(stream, z);
    return z;
}

double certify_moment(NoiseModel const& model, double p)
{
    model.validate();
    if (!(p > 1.0 && p <= 2.0))
        throw std::invalid_argument("moment order p must lie in (1, 2]");
    switch (model.kind)
    {
        case NoiseKind::SphereBounded: return std::pow(model.radius, p);
        case NoiseKind::TwoPoint: return std::pow(norm(model.vector), p);
        case NoiseKind::SymmetrizedPareto:
            if (!(model.tail_index > p))
                throw std::invalid_argument("Pareto p-th moment is infinite for index <= p");
            return model.tail_index * std::pow(model.x_m, p) / (model.tail_index - p);
        case NoiseKind::Gaussian: {
            // |z|/scale is chi-distributed with dim degrees of freedom.
            double const d = static_cast<double>(model.dim);
            return std::pow(model.scale, p) *
                   std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (d + p)) -
                            std::lgamma(0.5 * d));
        }
    }
    throw std::invalid_argument("unknown noise kind");
}

//---------------------------------------------------------------------------//

Oracle Oracle::additive(CostSpec cost, NoiseModel noise)
{
    if (!cost)
        throw std::invalid_argument("oracle requires a cost");
    noise.validate();
    if (noise.dim != cost->dim())
        throw std::invalid_argument("noise dimension does not match the cost");
    Oracle o;
    o.mode_ = OracleMode::AdditiveNoise;
    o.cost_ = std::move(cost);
    o.noise_ = std::move(noise);
    return o;
}

Oracle Oracle::noiseless(CostSpec cost)
{
    auto const dim = cost ? cost->dim() : 1;
    return additive(std::move(cost), NoiseModel::sphere(dim, 0.0));
}

Oracle Oracle::batch(std::shared_ptr<FiniteSumCost const> cost, std::size_t batch_size)
{
    if (!cost)
        throw std::invalid_argument("oracle requires a cost");
    if (batch_size < 1 || batch_size >= cost->num_samples())
        throw std::invalid_argument("batch size must satisfy 1 <= |S| < m");
    Oracle o;
    o.mode_ = OracleMode::BatchSubsample;
    o.cost_ = cost;
    o.finite_sum_ = std::move(cost);
    o.batch_size_ = batch_size;
    return o;
}

std::optional<double> Oracle::noise_bound() const
{
    if (mode_ == OracleMode::BatchSubsample)
        return 2.0 * finite_sum_->per_sample_bound();
    return noise_.as_bound();
}

void Oracle::query_into(std::span<double const> x, RandomStream& stream,
                        std::span<double> out) const
{
    require_dim(x, dim(), "oracle query");
    if (mode_ == OracleMode::AdditiveNoise)
    {
        cost_->gradient_into(x, out);
        if (noise_.kind == NoiseKind::SphereBounded && noise_.radius == 0.0)
            return;
        thread_local Vec z;
        z.resize(dim());
        noise_.sample_into(stream, z);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += z[i];
        return;
    }

    // Partial Fisher-Yates: the first batch_size_ slots form a uniform subset.
    std::size_t const m = finite_sum_->num_samples();
    thread_local std::vector<std::size_t> idx;
    idx.resize(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::fill(out.begin(), out.end(), 0.0);
    double const w = 1.0 / static_cast<double>(batch_size_);
    for (std::size_t k = 0; k < batch_size_; ++k)
    {
        auto const j = k + static_cast<std::size_t>(stream.uniform_index(m - k));
        std::swap(idx[k], idx[j]);
        finite_sum_->accumulate_sample_gradient(idx[k], x, w, out);
    }
}

Vec Oracle::query(std::span<double const> x, RandomStream& stream) const
{
    Vec g(dim());
    query_into(x, stream, g);
    return g;
}

//---------------------------------------------------------------------------//

ClippingBiasReport clipping_bias_probe(Oracle const& oracle, std::span<double const> x,
                                       double gamma, double p, ClippingProbeOptions const& options)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("clipping threshold must be positive");
    if (oracle.mode() != OracleMode::AdditiveNoise)
        throw std::invalid_argument("clipping_bias_probe needs an additive-noise oracle");
    if (options.num_samples < 2 || options.num_directions == 0)
        throw std::invalid_argument("clipping_bias_probe: too few samples or directions");

    double const sigma_p = certify_moment(oracle.noise(), p);
    Vec const grad = oracle.cost().gradient(x);
    if (norm(grad) > 0.5 * gamma)
        throw PreconditionViolation("clipping bias bound needs |grad f(x)| <= gamma/2");

    std::size_t const d = oracle.dim();
    std::size_t const n = options.num_samples;
    std::vector<double> clipped(n * d);
    // The oracle is unbiased, so E clip(g) - grad f = E[clip(g) - g]. Averaging
    // the clipping correction instead of clip(g) itself removes the noise
    // variance from the estimate and makes it exactly zero when nothing clips.
    Vec mean(d, 0.0), corr(d, 0.0), m2(d, 0.0);
    Vec raw(d);
    RandomStream stream(options.seed, 0);
    for (std::size_t i = 0; i < n; ++i)
    {
        std::span<double> g(clipped.data() + i * d, d);
        oracle.query_into(x, stream, raw);
        std::copy(raw.begin(), raw.end(), g.begin());
        clip_in_place(g, gamma);
        double const w = 1.0 / static_cast<double>(i + 1);
        for (std::size_t k = 0; k < d; ++k)
        {
            mean[k] += (g[k] - mean[k]) * w;
            double const c = g[k] - raw[k];
            double const delta = c - corr[k];
            corr[k] += delta * w;
            m2[k] += delta * (c - corr[k]);
        }
    }

    ClippingBiasReport report;
    report.num_samples = n;
    report.bias_bound = 4.0 * sigma_p * std::pow(gamma, 1.0 - p);
    double bias_sq = 0.0, se_sq = 0.0;
    for (std::size_t k = 0; k < d; ++k)
    {
        bias_sq += corr[k] * corr[k];
        se_sq += m2[k] / static_cast<double>(n - 1) / static_cast<double>(n);
    }
    report.bias_norm_estimate = std::sqrt(bias_sq);
    report.bias_standard_error = std::sqrt(se_sq);

    // Directions from a dedicated stream so they do not depend on the samples.
    RandomStream dir_stream(options.seed, 1);
    constexpr std::array<double, 6> kScaleFactors{0.0625, 0.125, 0.25, 0.5, 1.0, 2.0};
    report.subgaussian_margin = -std::numeric_limits<double>::infinity();
    Vec u(d);
    std::vector<double> proj(n);
    for (std::size_t dir = 0; dir < options.num_directions; ++dir)
    {
        for (auto& v : u)
            v = dir_stream.normal();
        double const un = norm(u);
        for (auto& v : u)
            v /= un;
        for (std::size_t i = 0; i < n; ++i)
        {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                s += u[k] * (clipped[i * d + k] - mean[k]);
            proj[i] = s;
        }
        for (double factor : kScaleFactors)
        {
            double const s = factor / gamma;
            double sum = 0.0, sum_sq = 0.0;
            for (double v : proj)
            {
                double const e = std::exp(s * v);
                sum += e;
                sum_sq += e * e;
            }
            double const mgf = sum / static_cast<double>(n);
            double const var = std::max(0.0, sum_sq / static_cast<double>(n) - mgf * mgf);
            double const margin = std::log(mgf) - 3.0 * gamma * gamma * s * s;
            if (margin > report.subgaussian_margin)
            {
                report.subgaussian_margin = margin;
                report.margin_standard_error =
                    std::sqrt(var / static_cast<double>(n)) / mgf;
                report.worst_scale = s;
            }
        }
    }
    return report;
}

}  // namespace ldplab
