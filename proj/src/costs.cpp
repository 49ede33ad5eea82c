// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/costs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldplab {
namespace {

void require_positive(double v, char const* what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

std::size_t checked_dim(std::size_t dim)
{
    if (dim == 0)
        throw std::invalid_argument("cost dimension must be positive");
    return dim;
}

// log(1 + exp(u)) without overflow.
double softplus(double u)
{
    return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

// 1 / (1 + exp(u))
double logistic_weight(double u)
{
    if (u >= 0.0)
    {
        double const e = std::exp(-u);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(u));
}

}  // namespace

Vec Cost::gradient(std::span<double const> x) const
{
    require_dim(x, dim_, name().c_str());
    Vec g(dim_);
    gradient_into(x, g);
    return g;
}

//---------------------------------------------------------------------------//

HuberCost::HuberCost(double threshold, std::size_t dim)
    : Cost(checked_dim(dim), 2.0, threshold, 0.0), threshold_(threshold)
{
    require_positive(threshold, "Huber threshold");
}

double HuberCost::value(std::span<double const> x) const
{
    double const r = norm(x);
    if (r <= threshold_)
        return 0.5 * r * r;
    return threshold_ * r - 0.5 * threshold_ * threshold_;
}

void HuberCost::gradient_into(std::span<double const> x, std::span<double> out) const
{
    double const r = norm(x);
    double const scale = r <= threshold_ ? 1.0 : threshold_ / r;
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = scale * x[i];
}

//---------------------------------------------------------------------------//

PseudoHuberCost::PseudoHuberCost(double scale, std::size_t dim)
    : Cost(checked_dim(dim), 1.0, scale * std::sqrt(static_cast<double>(dim)), 0.0), scale_(scale)
{
    require_positive(scale, "pseudo-Huber scale");
}

double PseudoHuberCost::value(std::span<double const> x) const
{
    double s = 0.0;
    for (double xi : x)
    {
        double const u = xi / scale_;
        // sqrt(1 + u^2) - 1 == u^2 / (sqrt(1 + u^2) + 1), stable near zero
        s += scale_ * scale_ * (u * u / (std::sqrt(1.0 + u * u) + 1.0));
    }
    return s;
}

void PseudoHuberCost::gradient_into(std::span<double const> x, std::span<double> out) const
{
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const u = x[i] / scale_;
        out[i] = x[i] / std::sqrt(1.0 + u * u);
    }
}

//---------------------------------------------------------------------------//

namespace {

std::size_t dataset_dim(std::vector<LabeledSample> const& samples)
{
    if (samples.empty())
        throw std::invalid_argument("batch_loss_cost: dataset must be non-empty");
    return samples.front().features.size();
}

double mean_feature_norm_sq(std::vector<LabeledSample> const& samples)
{
    double s = 0.0;
    for (auto const& r : samples)
        s += norm_sq(r.features);
    return s / static_cast<double>(samples.size());
}

double max_feature_norm(std::vector<LabeledSample> const& samples)
{
    double g = 0.0;
    for (auto const& r : samples)
        g = std::max(g, norm(r.features));
    return g;
}

}  // namespace

// The logistic Hessian is bounded by (1/4) mean(phi phi^T), whose largest
// eigenvalue is at most its trace.
FiniteSumCost::FiniteSumCost(std::vector<LabeledSample> samples, LossKind)
    : Cost(checked_dim(dataset_dim(samples)), 0.25 * mean_feature_norm_sq(samples),
           max_feature_norm(samples), 0.0),
      samples_(std::move(samples)),
      per_sample_bound_(grad_bound())
{
    for (auto const& r : samples_)
    {
        if (r.features.size() != dim())
            throw std::invalid_argument("batch_loss_cost: inconsistent feature dimension");
        if (!all_finite(r.features))
            throw std::invalid_argument("batch_loss_cost: non-finite feature");
        if (r.label != 1.0 && r.label != -1.0)
            throw std::invalid_argument("batch_loss_cost: labels must be +1 or -1");
    }
    if (!(per_sample_bound_ > 0.0))
        throw std::invalid_argument("batch_loss_cost: all feature vectors are zero");
}

double FiniteSumCost::sample_loss(std::size_t j, std::span<double const> x) const
{
    auto const& r = samples_.at(j);
    return softplus(-r.label * dot(r.features, x));
}

double FiniteSumCost::value(std::span<double const> x) const
{
    double s = 0.0;
    for (std::size_t j = 0; j < samples_.size(); ++j)
        s += sample_loss(j, x);
    return s / static_cast<double>(samples_.size());
}

void FiniteSumCost::accumulate_sample_gradient(std::size_t j, std::span<double const> x,
                                               double weight, std::span<double> out) const
{
    auto const& r = samples_[j];
    double const margin = r.label * dot(r.features, x);
    axpy(-weight * r.label * logistic_weight(margin), r.features, out);
}

Vec FiniteSumCost::sample_gradient(std::size_t j, std::span<double const> x) const
{
    require_dim(x, dim(), "sample_gradient");
    Vec g(dim(), 0.0);
    accumulate_sample_gradient(j, x, 1.0, g);
    return g;
}

void FiniteSumCost::gradient_into(std::span<double const> x, std::span<double> out) const
{
    std::fill(out.begin(), out.end(), 0.0);
    double const w = 1.0 / static_cast<double>(samples_.size());
    for (std::size_t j = 0; j < samples_.size(); ++j)
        accumulate_sample_gradient(j, x, w, out);
}

//---------------------------------------------------------------------------//

std::shared_ptr<HuberCost const> huber_cost(double threshold, std::size_t dim)
{
    return std::make_shared<HuberCost const>(threshold, dim);
}

std::shared_ptr<PseudoHuberCost const> pseudo_huber_cost(double scale, std::size_t dim)
{
    return std::make_shared<PseudoHuberCost const>(scale, dim);
}

std::shared_ptr<FiniteSumCost const> batch_loss_cost(std::vector<LabeledSample> dataset,
                                                     LossKind loss)
{
    return std::make_shared<FiniteSumCost const>(std::move(dataset), loss);
}

double finite_difference_error(Cost const& cost, std::span<double const> x)
{
    require_dim(x, cost.dim(), "finite_difference_error");
    double const h = 1e-5 * std::max(1.0, norm(x));
    Vec const g = cost.gradient(x);
    Vec fd(x.size());
    Vec probe(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        probe[i] = x[i] + h;
        double const up = cost.value(probe);
        probe[i] = x[i] - h;
        double const down = cost.value(probe);
        probe[i] = x[i];
        fd[i] = (up - down) / (2.0 * h);
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        diff += (g[i] - fd[i]) * (g[i] - fd[i]);
    return std::sqrt(diff) / std::max(1.0, norm(g));
}

}  // namespace ldplab
