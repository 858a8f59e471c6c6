#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "toeplitz/blocks.hpp"

using namespace toeplitz;

namespace {

BlockSchedule toy(int levels = 8) { return BlockSchedule(4, LevelRule::constant(1), LevelRule::pow2(0), levels); }

}  // namespace

TEST(Schedule, ToyValues) {
  const auto s = toy();
  EXPECT_EQ(s.a(1), 4);
  EXPECT_EQ(s.a(2), 12);
  EXPECT_EQ(s.a(3), 60);
  EXPECT_EQ(s.a(4), 540);
  EXPECT_EQ(s.period(2), 48);
  EXPECT_EQ(s.delta(1), Rational(1, 2));
  EXPECT_EQ(s.delta(3), Rational(7, 8));
}

TEST(Schedule, SeparatorLevelTwo) {
  const BlockSchedule s(3332, LevelRule::constant(3332), LevelRule::pow2(5), 4);
  EXPECT_EQ(s.a(2), BigInt(213249) * 3332);
  EXPECT_EQ(s.a(2), BigInt(710545668));
  // a_4 no longer fits in 64 bits
  EXPECT_GT(s.a(4), BigInt(std::numeric_limits<std::uint64_t>::max()));
  EXPECT_EQ(s.a64(4), BlockSchedule::kSaturated);
}

TEST(Schedule, DeltaIsPartialSumOfReciprocals) {
  const BlockSchedule s(7, LevelRule::constant(1), LevelRule::pow2(5), 6);
  Rational sum = 0;
  for (int n = 1; n <= 6; ++n) {
    sum += Rational(1, BigInt(1) << (n + 5));
    EXPECT_EQ(s.delta(n), sum);
    if (n > 1) {
      EXPECT_GT(s.delta(n), s.delta(n - 1));
    }
  }
  EXPECT_EQ(*s.delta_infinity(), Rational(1, 32));
}

TEST(Schedule, RejectsInvalidRules) {
  EXPECT_THROW(BlockSchedule(4, LevelRule::constant(1), LevelRule::list({2, 3}), 2), ScheduleError);
  EXPECT_THROW(BlockSchedule(4, LevelRule::constant(0), LevelRule::pow2(0), 3), ScheduleError);
  EXPECT_THROW(BlockSchedule(0, LevelRule::constant(1), LevelRule::pow2(0), 3), ScheduleError);
  EXPECT_THROW(BlockSchedule(4, LevelRule::constant(1), LevelRule::constant(1), 3), ScheduleError);
}

TEST(Schedule, JsonRoundTrip) {
  const BlockSchedule s(20, LevelRule::constant(1), LevelRule::list({2, 4, 12}), 3);
  const auto t = BlockSchedule::from_json(s.to_json());
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(t.a(n), s.a(n));
  EXPECT_EQ(t.to_json(), s.to_json());
}

TEST(Membership, Examples) {
  const auto s = toy();
  EXPECT_TRUE(s.in_level(9ull, 1));
  EXPECT_FALSE(s.in_level(5ull, 1));
  EXPECT_FALSE(s.in_level(13ull, 2));
  EXPECT_TRUE(s.in_B(9ull, 2));
  EXPECT_FALSE(s.in_B(5ull, 1));
  EXPECT_FALSE(s.in_B(5ull, 0));
  for (std::uint64_t j = 1; j <= 60; ++j) EXPECT_TRUE(s.in_B(j, 3));
}

TEST(Membership, EnclosingBlockExamples) {
  const auto s = toy();
  auto b = s.enclosing_block(10ull, 1);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->lo, 9u);
  EXPECT_EQ(b->hi, 12u);
  b = s.enclosing_block(3ull, 2);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->lo, 1u);
  EXPECT_EQ(b->hi, 12u);
  EXPECT_FALSE(s.enclosing_block(5ull, 1));
}

TEST(Membership, BigIndicesAgreeWithSmall) {
  const auto s = toy();
  for (std::uint64_t j = 1; j <= 2000; ++j)
    for (int n = 1; n <= 4; ++n) EXPECT_EQ(s.in_level(j, n), s.in_level(BigInt(j), n));
}

TEST(Membership, PeriodicityOfB) {
  const auto s = toy();
  for (int n = 1; n <= 3; ++n) {
    const std::uint64_t a = s.a64(n), p = s.period64(n);
    for (std::uint64_t j = 1; j <= a; ++j)
      for (std::uint64_t k = 1; j + k * p <= 20000; ++k) ASSERT_EQ(s.in_B(j, n), s.in_B(j + k * p, n));
  }
}

TEST(Membership, BlocksAreNested) {
  // Every block of level n begins and ends with a block of each lower level.
  const auto s = toy();
  for (int n = 2; n <= 4; ++n)
    for (std::uint64_t lo = 1; lo < 50000; lo += s.period64(n)) {
      const std::uint64_t hi = lo + s.a64(n) - 1;
      for (int k = 1; k < n; ++k) {
        EXPECT_TRUE(s.in_level(lo, k));
        EXPECT_EQ(s.enclosing_block(lo, k)->lo, lo);
        EXPECT_EQ(s.enclosing_block(hi, k)->hi, hi);
      }
    }
}

TEST(Depth, Examples) {
  const auto s = toy();
  EXPECT_EQ(s.depth(std::uint64_t{5}), 1);
  EXPECT_EQ(s.depth(std::uint64_t{9}), 2);
  EXPECT_EQ(s.depth(std::uint64_t{1}), 1);
  EXPECT_THROW(s.depth(std::uint64_t{0}), std::domain_error);
}

TEST(Depth, MatchesChainEnumeration) {
  const auto s = toy(10);
  for (std::uint64_t j = 1; j <= 3000; ++j) ASSERT_EQ(s.depth(j), oracle::brute_depth(s, j)) << "j = " << j;
}

TEST(Depth, BoundedByCoveringLevel) {
  const auto s = toy(10);
  for (std::uint64_t j = 1; j <= 10000; ++j) {
    const int n = s.first_level_covering(j);
    ASSERT_GE(s.depth(j), 1);
    ASSERT_LE(s.depth(j), n);
  }
}

TEST(FillLevel, SmallestLevelContaining) {
  const auto s = toy();
  for (std::uint64_t j = 1; j <= 5000; ++j) {
    const int m = s.fill_level(j);
    EXPECT_TRUE(s.in_level(j, m));
    for (int k = 1; k < m; ++k) EXPECT_FALSE(s.in_level(j, k));
  }
}

TEST(WalkLevel, PartitionsTheNewPart) {
  const auto s = toy();
  for (int n = 2; n <= 4; ++n) {
    std::vector<int> cover(s.a64(n) + 1, 0);
    s.walk_level(
        n, s.a64(n),
        [&](std::uint64_t lo, int k) {
          EXPECT_EQ(s.enclosing_block(lo, k)->lo, lo);
          for (std::uint64_t x = lo; x < lo + s.a64(k); ++x) ++cover[x];
        },
        [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t next, int) {
          EXPECT_EQ(next, hi + 1);
          for (std::uint64_t x = lo; x <= hi; ++x) {
            EXPECT_FALSE(s.in_B(x, n - 1));
            ++cover[x];
          }
        });
    for (std::uint64_t x = s.a64(n - 1) + 1; x <= s.a64(n); ++x) ASSERT_EQ(cover[x], 1) << x;
  }
}

TEST(Facts, ToyScheduleSmallHorizon) {
  FactsOptions o;
  o.horizon = 10'000;
  for (const auto& r : verify_facts(toy(), o)) EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Facts, GapBetweenFirstLevelOneBlocks) {
  const auto s = toy();
  // [1,4] and [9,12]: gap 4 = (d_1 - 1) a_1
  EXPECT_EQ(s.enclosing_block(9ull, 1)->lo - s.enclosing_block(1ull, 1)->hi - 1, (2 - 1) * 4u);
}

TEST(Facts, DensityBoundFailsForTightConstant) {
  // With M = 1 the density bound |J n B_n| <= delta_n |J| cannot hold on
  // intervals that start inside a block.
  FactsOptions o;
  o.horizon = 2000;
  o.M = 1;
  const auto reps = verify_facts(toy(), o);
  EXPECT_EQ(reps[2].status, Status::fail);
}
