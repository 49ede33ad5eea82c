// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <gtest/gtest.h>

#include "ldplab/errors.hpp"
#include "ldplab/oracles.hpp"

namespace ldplab {
namespace {

TEST(Noise, TwoPointAtoms)
{
    auto const m = NoiseModel::two_point({1.0, 0.0});
    RandomStream s(1, 0);
    int plus = 0;
    int const n = 10000;
    for (int i = 0; i < n; ++i)
    {
        auto const z = sample_noise(m, s);
        ASSERT_EQ(z[1], 0.0);
        ASSERT_TRUE(z[0] == 1.0 || z[0] == -1.0);
        plus += z[0] > 0;
    }
    EXPECT_NEAR(plus / double(n), 0.5, 0.02);
}

TEST(Noise, ZeroSphereIsZero)
{
    auto const m = NoiseModel::sphere(3, 0.0);
    RandomStream s(2, 0);
    for (int i = 0; i < 100; ++i)
        ASSERT_EQ(norm(sample_noise(m, s)), 0.0);
}

TEST(Noise, SphereHasFixedRadius)
{
    auto const m = NoiseModel::sphere(4, 2.0);
    RandomStream s(3, 0);
    for (int i = 0; i < 100; ++i)
        ASSERT_NEAR(norm(sample_noise(m, s)), 2.0, 1e-12);
    EXPECT_EQ(m.as_bound(), 2.0);
}

TEST(Noise, ParetoRadiusAboveScale)
{
    auto const m = NoiseModel::pareto(2, 1.5, 3.0, 2.0);
    RandomStream s(4, 0);
    for (int i = 0; i < 1000; ++i)
        ASSERT_GE(norm(sample_noise(m, s)), 1.5 * (1 - 1e-12));
    EXPECT_FALSE(m.as_bound().has_value());
}

TEST(Noise, Certificates)
{
    EXPECT_NEAR(certify_moment(NoiseModel::pareto(1, 1.0, 3.0, 1.5), 1.5), 2.0, 1e-14);
    EXPECT_NEAR(certify_moment(NoiseModel::pareto(1, 1.0, 3.0, 2.0), 2.0), 3.0, 1e-14);
    EXPECT_NEAR(certify_moment(NoiseModel::two_point({0.6, 0.8}), 2.0), 1.0, 1e-15);
    EXPECT_NEAR(certify_moment(NoiseModel::sphere(3, 2.0), 1.5), 2.8284271247461903, 1e-14);
    // E|z|^2 = d scale^2 for an isotropic Gaussian.
    EXPECT_NEAR(certify_moment(NoiseModel::gaussian(3, 0.5), 2.0), 0.75, 1e-13);
}

TEST(Noise, ParetoMomentMatchesSampling)
{
    auto const m = NoiseModel::pareto(1, 1.0, 3.0, 1.5);
    RandomStream s(5, 0);
    double sum = 0.0;
    int const n = 400000;
    for (int i = 0; i < n; ++i)
        sum += std::pow(std::abs(sample_noise(m, s)[0]), 1.5);
    EXPECT_NEAR(sum / n, 2.0, 0.03);
}

TEST(Noise, RejectsInfiniteMoment)
{
    EXPECT_THROW(NoiseModel::pareto(1, 1.0, 1.5, 1.5).validate(), std::invalid_argument);
    EXPECT_THROW(NoiseModel::pareto(1, 1.0, 1.2, 1.5).validate(), std::invalid_argument);
    EXPECT_THROW(NoiseModel::sphere(2, -1.0).validate(), std::invalid_argument);
    EXPECT_THROW(noise_kind_from_string("laplace"), std::invalid_argument);
}

TEST(Oracle, NoiselessIsExactGradient)
{
    auto const f = huber_cost(1.0, 2);
    auto const o = Oracle::additive(f, NoiseModel::sphere(2, 0.0));
    RandomStream s(6, 0);
    Vec const x{3.0, 4.0};
    EXPECT_EQ(o.query(x, s), f->gradient(x));
}

TEST(Oracle, TwoPointAroundGradient)
{
    auto const f = huber_cost(1.0, 2);
    Vec const v{0.48, 0.64};
    auto const o = Oracle::additive(f, NoiseModel::two_point(v));
    RandomStream s(7, 0);
    Vec const x{0.1, -0.2};
    for (int i = 0; i < 100; ++i)
    {
        auto const g = o.query(x, s);
        bool const plus = g[0] == x[0] + v[0] && g[1] == x[1] + v[1];
        bool const minus = g[0] == x[0] - v[0] && g[1] == x[1] - v[1];
        ASSERT_TRUE(plus || minus);
    }
}

TEST(Oracle, DimensionMismatch)
{
    EXPECT_THROW(Oracle::additive(huber_cost(1.0, 2), NoiseModel::sphere(3, 1.0)),
                 std::invalid_argument);
    auto const o = Oracle::noiseless(huber_cost(1.0, 2));
    RandomStream s(8, 0);
    Vec const x{1.0, 2.0, 3.0};
    EXPECT_THROW(o.query(x, s), std::invalid_argument);
}

TEST(Oracle, BatchSubsampling)
{
    auto const f = batch_loss_cost({{{1.0, 0.0}, 1.0}, {{0.0, 2.0}, -1.0}});
    EXPECT_THROW(Oracle::batch(f, 2), std::invalid_argument);
    EXPECT_THROW(Oracle::batch(f, 0), std::invalid_argument);
    auto const o = Oracle::batch(f, 1);
    Vec const x{0.3, 0.1};
    auto const g0 = f->sample_gradient(0, x);
    auto const g1 = f->sample_gradient(1, x);
    RandomStream s(9, 0);
    int first = 0;
    int const n = 100000;
    for (int i = 0; i < n; ++i)
    {
        auto const g = o.query(x, s);
        bool const is0 = g == g0;
        ASSERT_TRUE(is0 || g == g1);
        first += is0;
    }
    EXPECT_NEAR(first / double(n), 0.5, 0.01);
    EXPECT_DOUBLE_EQ(*o.noise_bound(), 4.0);
}

TEST(ClippingProbe, InactiveClippingHasNoBias)
{
    auto const f = huber_cost(1.0, 2);
    auto const o = Oracle::additive(f, NoiseModel::two_point({0.48, 0.64}));
    Vec const x{0.1, 0.0};
    ClippingProbeOptions opt;
    opt.num_samples = 2000;
    auto const r = clipping_bias_probe(o, x, 4.0, 2.0, opt);
    EXPECT_EQ(r.bias_norm_estimate, 0.0);
}

TEST(ClippingProbe, ParetoBiasBelowBound)
{
    auto const f = huber_cost(1.0, 2);
    auto const o = Oracle::additive(f, NoiseModel::pareto(2, 1.0, 3.0, 1.5));
    Vec const x{0.0, 0.0};
    ClippingProbeOptions opt;
    opt.num_samples = 200000;
    auto const r = clipping_bias_probe(o, x, 8.0, 1.5, opt);
    EXPECT_NEAR(r.bias_bound, 4 * 2 / std::sqrt(8.0), 1e-12);
    EXPECT_LE(r.bias_norm_estimate, r.bias_bound);
}

TEST(ClippingProbe, LargeGradientViolatesPrecondition)
{
    auto const f = huber_cost(1.0, 2);
    auto const o = Oracle::additive(f, NoiseModel::sphere(2, 1.0));
    Vec const x{5.0, 0.0};
    ClippingProbeOptions opt;
    opt.num_samples = 100;
    EXPECT_THROW(clipping_bias_probe(o, x, 1.0, 2.0, opt), PreconditionViolation);
}

}  // namespace
}  // namespace ldplab
