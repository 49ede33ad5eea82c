// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ldplab/theory.hpp"

namespace ldplab {
namespace {

TEST(Rates, Sgd)
{
    EXPECT_NEAR(rate_sgd(1, 1).rate(1.0), 1.0 / 24, 1e-16);
    EXPECT_EQ(rate_sgd(2, 3).rate(0.0), 0.0);
    EXPECT_EQ(rate_sgd(2, 3).rate(-0.1), std::numeric_limits<double>::infinity());
    EXPECT_EQ(rate_sgd(1, 1).decay.family, DecayFamily::TOverLog);
    EXPECT_THROW(rate_sgd(0, 1), std::invalid_argument);
}

TEST(Rates, Csgd)
{
    EXPECT_NEAR(rate_csgd(1, 2.0).rate(1.0), 1.0 / 384, 1e-17);
    EXPECT_NEAR(rate_csgd(1, 1.5).rate(1.0), 1.0 / 768, 1e-17);
    EXPECT_NEAR(rate_csgd(1, 2.0, CsgdConstants::Corollary).rate(1.0), 1.0 / 768, 1e-17);
    EXPECT_NEAR(rate_csgd(1, 1.5, CsgdConstants::Corollary).rate(1.0), 1.0 / 384, 1e-17);
    EXPECT_NEAR(beta_p(1.5), 0.8, 1e-15);
    EXPECT_EQ(rate_csgd(1, 1.5).decay.family, DecayFamily::TBetaOverLog);
    EXPECT_EQ(rate_csgd(1, 2.0).decay.family, DecayFamily::TOverLogSq);
    EXPECT_THROW(rate_csgd(1, 1.0), std::invalid_argument);
    EXPECT_THROW(rate_csgd(1, 2.5), std::invalid_argument);
}

TEST(Rates, GeneralC)
{
    EXPECT_EQ(rate_csgd_general(1, 1, 1.5).rate(0.0), 0.0);
    EXPECT_NEAR(rate_csgd_general(1, 4, 2.0).rate(2.0), 1.0 / 384, 1e-17);
    for (double p : {1.2, 1.5, 1.9, 2.0})
        for (double G : {0.5, 1.0, 3.0})
            for (double x : {0.0, 0.3, 1.0, 7.0})
            {
                double const a = rate_csgd_general(G, 2 * G, p).rate(x);
                double const b = rate_csgd(G, p).rate(x);
                ASSERT_NEAR(a, b, 1e-15 * std::max(1.0, b)) << p << " " << G << " " << x;
            }
}

TEST(Rates, ShapeAndGrowth)
{
    for (auto const& r : {rate_sgd(1, 2), rate_csgd(1, 1.3), rate_csgd(2, 2.0)})
    {
        double prev = 0.0;
        for (double x = 0.0; x <= 10.0; x += 0.5)
        {
            double const v = r.rate(x);
            ASSERT_GE(v, prev);
            prev = v;
        }
        double prev_n = 0.0;
        for (double t = 1e3; t <= 1e12; t *= 10)
        {
            ASSERT_GT(r.decay_rate(t), prev_n);
            prev_n = r.decay_rate(t);
        }
    }
}

std::vector<double> grid(double lo, double hi, double h)
{
    std::vector<double> g;
    for (double v = lo; v <= hi + 1e-12; v += h)
        g.push_back(v);
    return g;
}

TEST(FenchelLegendre, MatchesClosedForms)
{
    auto const x = grid(0.0, 1.0, 0.25);
    auto const lam = grid(0.0, 1.0, 1e-3);
    auto const sgd = rate_sgd(1, 1);
    auto const v = fenchel_legendre([&](double l) { return sgd.phi(l); }, x, lam);
    EXPECT_EQ(v[0], 0.0);
    EXPECT_NEAR(v[4], 1.0 / 24, 1e-9);

    auto const cs = rate_csgd(1, 1.5);
    auto const w = fenchel_legendre([&](double l) { return cs.phi(l); }, x, grid(0.0, 0.01, 1e-5));
    EXPECT_NEAR(w[4], 1.0 / 768, 1e-9);
}

TEST(FenchelLegendre, Errors)
{
    std::vector<double> const empty;
    std::vector<double> const one{1.0};
    std::vector<double> const unsorted{1.0, 0.0};
    auto const phi = [](double l) { return l * l; };
    EXPECT_THROW(fenchel_legendre(phi, empty, one), std::invalid_argument);
    EXPECT_THROW(fenchel_legendre(phi, one, empty), std::invalid_argument);
    EXPECT_THROW(fenchel_legendre(phi, one, unsorted), std::invalid_argument);
}

TEST(LowerBound, ExactProbability)
{
    EXPECT_EQ(lower_bound_exact_prob(1), 1.0);
    EXPECT_EQ(lower_bound_exact_prob(3), 0.25);
    EXPECT_EQ(lower_bound_exact_prob(11), 9.765625e-4);
}

TEST(Decay, Families)
{
    EXPECT_EQ(decay_family_from_string("t-over-log2"), DecayFamily::TOverLogSq);
    EXPECT_EQ(to_string(DecayFamily::SqrtOverLog), "sqrt-over-log");
    EXPECT_THROW(decay_family_from_string("cubic"), std::invalid_argument);
    double const t = 100.0;
    EXPECT_NEAR((DecaySequence{DecayFamily::TOverLog, 2.0})(t), t / std::log(t), 1e-12);
    EXPECT_NEAR((DecaySequence{DecayFamily::TBetaOverLog, 1.5})(t), std::pow(t, 0.8) / std::log(t),
                1e-12);
}

TEST(Sota, Slopes)
{
    SotaParams liu;
    liu.B = 1.0;
    EXPECT_NEAR(sota_curve(SotaKind::LiuSgd, liu).slope(1.0), -1.0 / 12, 1e-16);

    SotaParams arm;
    arm.C = 2.0;
    arm.L = 1.0;
    EXPECT_NEAR(sota_curve(SotaKind::ArmackiNsgd, arm).slope(1.0), -1.0 / 256, 1e-16);

    SotaParams ng;
    ng.sigma = 1.0;
    ng.delta = 1.0;
    ng.L = 1.0;
    EXPECT_NEAR(sota_curve(SotaKind::NguyenCsgd, ng).slope(2.0), -1.0 / 360, 1e-16);
}

TEST(Sota, MissingParameters)
{
    SotaParams none;
    EXPECT_THROW(sota_curve(SotaKind::LiuSgd, none), std::invalid_argument);
    SotaParams partial;
    partial.sigma = 1.0;
    partial.L = 1.0;
    EXPECT_THROW(sota_curve(SotaKind::NguyenCsgd, partial), std::invalid_argument);
    SotaParams negative;
    negative.C = -1.0;
    negative.L = 1.0;
    EXPECT_THROW(sota_curve(SotaKind::ArmackiNsgd, negative), std::invalid_argument);
}

TEST(Sota, Dominance)
{
    SotaParams q;
    q.B = 1.0;
    q.sigma = 1.0;
    q.delta = 1.0;
    q.L = 1.0;
    q.C = 1.0;
    for (double p : {1.2, 1.5, 1.8})
    {
        q.p = p;
        auto const ours = rate_csgd(1, p).decay;
        auto const theirs = sota_curve(SotaKind::NguyenCsgd, q).decay;
        for (double t = 1e3; t <= 1e9; t *= 10)
            ASSERT_GT(ours(t), theirs(t)) << p << " " << t;
    }
    auto const sgd = rate_sgd(1, 1).decay;
    auto const liu = sota_curve(SotaKind::LiuSgd, q).decay;
    for (double t = 1e3; t <= 1e9; t *= 10)
        ASSERT_GT(sgd(t), liu(t));
}

}  // namespace
}  // namespace ldplab
