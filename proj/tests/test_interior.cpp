#include <gtest/gtest.h>

#include "toeplitz/interior.hpp"

using namespace toeplitz;

namespace {

const InteriorParams& params() {
  static const InteriorParams P = make_interior_params(20, LevelRule::pow2(4));
  return P;
}

const InteriorSequence& seq() {
  static const InteriorSequence s = generate_interior(params(), 4);
  return s;
}

}  // namespace

TEST(InteriorParams, Schedule) {
  const auto& P = params();
  EXPECT_EQ(P.delta, Rational(1, 16));
  EXPECT_EQ(P.schedule.a(2), 660);
  EXPECT_EQ(P.schedule.a(3), 42900);
  EXPECT_EQ(P.schedule.a(4), 5534100);
}

TEST(InteriorParams, Rejections) {
  // delta_infinity = 1/8 is too large
  EXPECT_THROW(make_interior_params(20, LevelRule::pow2(2)), ParameterError);
  // a_1 = 2 leaves no grid point strictly inside Delta_delta
  EXPECT_THROW(make_interior_params(2, LevelRule::pow2(4)), ParameterError);
}

TEST(Snap, Example) {
  const auto g = nearest_grid_point(Rational(1, 16), 20, 0.25, 0.35, Counts{});
  ASSERT_TRUE(g);
  EXPECT_EQ(g->first, 5);
  EXPECT_EQ(g->second, 7);
  // counts (20 - 12, 5, 7)
}

TEST(Snap, ResultIsStrictlyInsideAndNearest) {
  const Rational d(1, 16);
  for (std::uint64_t a : {20u, 37u, 100u}) {
    for (double s = 0.0; s <= 1.0; s += 0.07)
      for (double t = 0.0; s + t <= 1.0; t += 0.07) {
        const auto g = nearest_grid_point(d, a, s, t, Counts{});
        ASSERT_TRUE(g);
        ASSERT_TRUE(in_delta_region(d, a, static_cast<std::uint64_t>(g->first), static_cast<std::uint64_t>(g->second)));
        // brute force over all interior grid points
        const std::int64_t t1 = std::llround(s * static_cast<double>(a)), t2 = std::llround(t * static_cast<double>(a));
        std::int64_t best = -1;
        for (std::uint64_t c1 = 0; c1 <= a; ++c1)
          for (std::uint64_t c2 = 0; c1 + c2 <= a; ++c2)
            if (in_delta_region(d, a, c1, c2)) {
              const auto x = static_cast<std::int64_t>(c1), y = static_cast<std::int64_t>(c2);
              const std::int64_t cost = std::llabs(x - t1) + std::llabs(y - t2) + std::llabs(x + y - t1 - t2);
              if (best < 0 || cost < best) best = cost;
            }
        const std::int64_t got = std::llabs(g->first - t1) + std::llabs(g->second - t2) +
                                 std::llabs(g->first + g->second - t1 - t2);
        ASSERT_EQ(got, best);
      }
  }
}

TEST(Snap, RespectsInheritedCounts) {
  const Counts inherited{{3, 9, 0}};
  const auto g = nearest_grid_point(Rational(1, 16), 20, 0.2, 0.2, inherited);
  ASSERT_TRUE(g);
  EXPECT_GE(g->first, 9);
  EXPECT_LE(20 - g->first - g->second, 20 - 3);
}

TEST(Kronecker, PointsAreInUnitSquareAndDistinct) {
  std::set<std::pair<double, double>> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto [x, y] = kronecker_point(k);
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    ASSERT_GE(y, 0.0);
    ASSERT_LT(y, 1.0);
    seen.insert({x, y});
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Interleave, ExactCountsAndSpread) {
  const Counts need{{5, 3, 2}};
  const auto v = interleave(need);
  Counts c;
  for (auto s : v) ++c[s];
  EXPECT_EQ(c, need);
  EXPECT_EQ(interleave(Counts{}).size(), 0u);
  // smooth: every prefix stays within one symbol of its proportional share
  Counts run;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ++run[v[i]];
    for (int s = 0; s < 3; ++s) {
      const double share = static_cast<double>(need[s]) * static_cast<double>(i + 1) / 10.0;
      EXPECT_LE(std::abs(static_cast<double>(run[s]) - share), 1.0);
    }
  }
}

TEST(InteriorSequence, AveragesHitTargetsExactly) {
  const auto& s = seq();
  ASSERT_EQ(s.targets.size(), 4u);
  for (const auto& t : s.targets) {
    const Counts c = s.sequence.counts(1, t.a);
    EXPECT_EQ(Rational(BigInt(c[1]), BigInt(t.a)), t.x());
    EXPECT_EQ(Rational(BigInt(c[2]), BigInt(t.a)), t.y());
    EXPECT_TRUE(in_delta_region(params().delta, t.a, t.counts[1], t.counts[2]));
  }
  EXPECT_TRUE(check_interior(params(), s.sequence, s.targets).passed());
}

TEST(InteriorSequence, TargetsSpanAnOpenSet) {
  std::vector<Point2> pts;
  for (const auto& t : seq().targets) pts.push_back({t.x(), t.y()});
  EXPECT_GT(hull(pts).area, 0);
}

TEST(InteriorSequence, IsToeplitz) {
  ToeplitzOptions o;
  o.samples = 10'000;
  o.sample_range = 10'000;
  EXPECT_TRUE(toeplitz_check(seq().sequence, params().schedule, o).passed());
}

TEST(InteriorSequence, FirstBlockCopies) {
  // Every level-n block repeats [1, a_n].
  const auto& s = seq();
  const auto& S = params().schedule;
  for (int n = 1; n <= 2; ++n)
    for (std::uint64_t lo = 1 + S.period64(n); lo + S.a64(n) - 1 <= s.sequence.horizon(); lo += S.period64(n))
      for (std::uint64_t i = 0; i < S.a64(n); ++i) ASSERT_EQ(s.sequence.at(lo + i), s.sequence.at(1 + i));
}

TEST(InteriorSequence, TargetsFromJsonRoundTrip) {
  json arr = json::array();
  for (const auto& t : seq().targets) arr.push_back(t.to_json());
  const auto back = targets_from_json(arr);
  ASSERT_EQ(back.size(), seq().targets.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].counts, seq().targets[i].counts);
    EXPECT_EQ(back[i].level, seq().targets[i].level);
  }
}

TEST(InteriorSequence, CorruptedTargetIsReported) {
  auto targets = seq().targets;
  targets[1].counts[1] += 1;
  targets[1].counts[0] -= 1;
  EXPECT_EQ(check_interior(params(), seq().sequence, targets).status, Status::fail);
}
