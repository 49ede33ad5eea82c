// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "ldplab/errors.hpp"
#include "ldplab/lemmas.hpp"

namespace ldplab {
namespace {

std::shared_ptr<Oracle const> additive(NoiseModel noise)
{
    auto const d = noise.kind == NoiseKind::TwoPoint ? noise.vector.size() : noise.dim;
    return std::make_shared<Oracle const>(Oracle::additive(huber_cost(1.0, d), std::move(noise)));
}

TEST(Lemmas, Names)
{
    EXPECT_EQ(lemma_suite_from_string("clip-subgauss"), LemmaSuite::ClipSubgauss);
    EXPECT_EQ(to_string(LemmaSuite::MgfInner), "mgf-inner");
    EXPECT_THROW(lemma_suite_from_string("nope"), std::invalid_argument);
}

// |z| = M on every draw, so the bound holds with equality.
TEST(Lemmas, MgfBoundedSaturatedByTwoPoint)
{
    LemmaParams p;
    p.oracle = additive(NoiseModel::two_point({0.48, 0.64}));
    p.num_samples = 1000;
    auto const r = verify_lemma_suite(LemmaSuite::MgfBounded, p);
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_NEAR(r.checks[0].empirical, std::exp(1.0), 1e-13);
    EXPECT_EQ(r.checks[0].standard_error, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(Lemmas, MgfInnerOnSphere)
{
    LemmaParams p;
    p.oracle = additive(NoiseModel::sphere(3, 2.0));
    p.num_samples = 20000;
    auto const r = verify_lemma_suite(LemmaSuite::MgfInner, p);
    EXPECT_EQ(r.checks.size(), p.inner_norms.size() * p.num_directions);
    EXPECT_TRUE(r.pass);
}

TEST(Lemmas, ClipBiasPareto)
{
    LemmaParams p;
    p.oracle = additive(NoiseModel::pareto(2, 1.0, 3.0, 1.5));
    p.p = 1.5;
    p.gammas = {4.0, 16.0};
    p.num_samples = 50000;
    auto const r = verify_lemma_suite(LemmaSuite::ClipBias, p);
    EXPECT_EQ(r.checks.size(), 2u);
    EXPECT_TRUE(r.pass);
    auto const s = verify_lemma_suite(LemmaSuite::ClipSubgauss, p);
    EXPECT_TRUE(s.pass);
}

TEST(Lemmas, BatchBound)
{
    std::vector<LabeledSample> data;
    RandomStream s(3, 0);
    for (int i = 0; i < 20; ++i)
        data.push_back({{s.normal(), s.normal()}, i % 2 ? 1.0 : -1.0});
    LemmaParams p;
    p.oracle = std::make_shared<Oracle const>(Oracle::batch(batch_loss_cost(data), 4));
    p.x = {0.5, -0.5};
    p.num_samples = 20000;
    auto const r = verify_lemma_suite(LemmaSuite::BatchBound, p);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.checks[0].violations, 0);
}

TEST(Lemmas, Preconditions)
{
    LemmaParams p;
    p.num_samples = 100;
    p.oracle = additive(NoiseModel::pareto(2, 1.0, 3.0, 2.0));
    EXPECT_THROW(verify_lemma_suite(LemmaSuite::MgfBounded, p), PreconditionViolation);
    EXPECT_THROW(verify_lemma_suite(LemmaSuite::BatchBound, p), PreconditionViolation);

    p.general_C = 1.0;
    p.p = 1.5;
    p.t = 10;  // burn-in is 2^10 - 1
    EXPECT_THROW(verify_lemma_suite(LemmaSuite::ClipBias, p), PreconditionViolation);

    LemmaParams far;
    far.oracle = additive(NoiseModel::sphere(2, 1.0));
    far.x = {5.0, 0.0};
    far.gammas = {1.0};
    far.num_samples = 100;
    EXPECT_THROW(verify_lemma_suite(LemmaSuite::ClipBias, far), PreconditionViolation);

    LemmaParams empty;
    EXPECT_THROW(verify_lemma_suite(LemmaSuite::MgfInner, empty), std::invalid_argument);
}

}  // namespace
}  // namespace ldplab
