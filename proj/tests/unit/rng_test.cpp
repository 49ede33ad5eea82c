// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <set>

#include <gtest/gtest.h>

#include "ldplab/rng.hpp"

namespace ldplab {
namespace {

// Random123 known-answer vectors.
TEST(Philox, KnownAnswerZero)
{
    auto const r = philox4x32_10({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(r[0], 0x6627e8d5u);
    EXPECT_EQ(r[1], 0xe169c58du);
    EXPECT_EQ(r[2], 0xbc57ac4cu);
    EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes)
{
    auto const r = philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                 {0xffffffff, 0xffffffff});
    EXPECT_EQ(r[0], 0x408f276du);
    EXPECT_EQ(r[1], 0x41c83b0eu);
    EXPECT_EQ(r[2], 0xa20bc7c6u);
    EXPECT_EQ(r[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi)
{
    auto const r = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                 {0xa4093822, 0x299f31d0});
    EXPECT_EQ(r[0], 0xd16cfe09u);
    EXPECT_EQ(r[1], 0x94fdccebu);
    EXPECT_EQ(r[2], 0x5001e420u);
    EXPECT_EQ(r[3], 0x24126ea1u);
}

TEST(RandomStream, SameKeySameSequence)
{
    RandomStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i)
        ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, StreamsDiffer)
{
    RandomStream a(42, 0), b(42, 1), c(43, 0);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 256; ++i)
    {
        auto const x = a.next_u64();
        same_ab += x == b.next_u64();
        same_ac += x == c.next_u64();
    }
    EXPECT_EQ(same_ab, 0);
    EXPECT_EQ(same_ac, 0);
}

TEST(RandomStream, UniformIsOpenUnitInterval)
{
    RandomStream s(1, 2);
    double sum = 0.0;
    int const n = 200000;
    for (int i = 0; i < n; ++i)
    {
        double const u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(RandomStream, NormalMoments)
{
    RandomStream s(3, 4);
    double m1 = 0.0, m2 = 0.0;
    int const n = 200000;
    for (int i = 0; i < n; ++i)
    {
        double const z = s.normal();
        m1 += z;
        m2 += z * z;
    }
    EXPECT_NEAR(m1 / n, 0.0, 0.01);
    EXPECT_NEAR(m2 / n, 1.0, 0.02);
}

TEST(RandomStream, UniformIndexCoversRange)
{
    RandomStream s(5, 6);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i)
    {
        auto const k = s.uniform_index(7);
        ASSERT_LT(k, 7u);
        seen.insert(k);
    }
    EXPECT_EQ(seen.size(), 7u);
    EXPECT_THROW(s.uniform_index(0), std::invalid_argument);
}

}  // namespace
}  // namespace ldplab
