// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ldplab/linalg.hpp"

namespace ldplab {

/// A differentiable cost with certified constants: every gradient has norm at
/// most grad_bound(), the gradient is smoothness()-Lipschitz and the value never
/// drops below lower_bound(). Instances are immutable once built and may be
/// shared across threads.
class Cost
{
  public:
    virtual ~Cost() = default;

    virtual std::string name() const = 0;
    virtual double value(std::span<double const> x) const = 0;
    virtual void gradient_into(std::span<double const> x, std::span<double> out) const = 0;

    Vec gradient(std::span<double const> x) const;

    std::size_t dim() const { return dim_; }
    double smoothness() const { return smoothness_; }
    double grad_bound() const { return grad_bound_; }
    double lower_bound() const { return lower_bound_; }

  protected:
    Cost(std::size_t dim, double smoothness, double grad_bound, double lower_bound)
        : dim_(dim), smoothness_(smoothness), grad_bound_(grad_bound), lower_bound_(lower_bound)
    {
    }

  private:
    std::size_t dim_;
    double smoothness_;
    double grad_bound_;
    double lower_bound_;
};

using CostSpec = std::shared_ptr<Cost const>;

/// f(x) = |x|^2/2 inside the ball of radius G, G|x| - G^2/2 outside.
class HuberCost final : public Cost
{
  public:
    HuberCost(double threshold, std::size_t dim);

    std::string name() const override { return "huber"; }
    double value(std::span<double const> x) const override;
    void gradient_into(std::span<double const> x, std::span<double> out) const override;

    double threshold() const { return threshold_; }

  private:
    double threshold_;
};

/// Separable pseudo-Huber: sum_i s^2 (sqrt(1 + (x_i/s)^2) - 1).
class PseudoHuberCost final : public Cost
{
  public:
    PseudoHuberCost(double scale, std::size_t dim);

    std::string name() const override { return "pseudo-huber"; }
    double value(std::span<double const> x) const override;
    void gradient_into(std::span<double const> x, std::span<double> out) const override;

    double scale() const { return scale_; }

  private:
    double scale_;
};

struct LabeledSample
{
    Vec features;
    double label = 1.0;  ///< +1 or -1
};

enum class LossKind
{
    LipschitzLogistic,
};

/// Finite-sum cost f(x) = (1/m) sum_i loss(x; sample_i) whose per-sample
/// gradients are exposed for the subsampling oracle.
class FiniteSumCost final : public Cost
{
  public:
    FiniteSumCost(std::vector<LabeledSample> samples, LossKind loss);

    std::string name() const override { return "logistic"; }
    double value(std::span<double const> x) const override;
    void gradient_into(std::span<double const> x, std::span<double> out) const override;

    std::size_t num_samples() const { return samples_.size(); }
    /// Adds weight * grad loss(x; sample j) into out.
    void accumulate_sample_gradient(std::size_t j, std::span<double const> x, double weight,
                                    std::span<double> out) const;
    Vec sample_gradient(std::size_t j, std::span<double const> x) const;
    double sample_loss(std::size_t j, std::span<double const> x) const;

    /// Uniform bound on every per-sample gradient norm: max_i |features_i|.
    double per_sample_bound() const { return per_sample_bound_; }
    std::vector<LabeledSample> const& samples() const { return samples_; }

  private:
    std::vector<LabeledSample> samples_;
    double per_sample_bound_;
};

std::shared_ptr<HuberCost const> huber_cost(double threshold, std::size_t dim);
std::shared_ptr<PseudoHuberCost const> pseudo_huber_cost(double scale, std::size_t dim);
std::shared_ptr<FiniteSumCost const> batch_loss_cost(std::vector<LabeledSample> dataset,
                                                     LossKind loss = LossKind::LipschitzLogistic);

/// Relative error between the analytic gradient and central differences with
/// step 1e-5 * max(1, |x|).
double finite_difference_error(Cost const& cost, std::span<double const> x);

}  // namespace ldplab
