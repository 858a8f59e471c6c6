#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "toeplitz/rotation.hpp"
#include "toeplitz/separator.hpp"

using namespace toeplitz;

namespace {

const SeparatorSequence& paper() {
  static const SeparatorSequence s(make_separator_params(17, 64, LevelRule::pow2(5)));
  return s;
}

SeparatorSequence tiny() { return SeparatorSequence(make_separator_params(1, 1, LevelRule::pow2(1), true, 5)); }

// Builds [1, a_{top}] level by level: blocks of lower levels copy the prefix,
// the remaining positions take the colour of their interval.
std::vector<Symbol> materialize(const SeparatorSequence& s, int top) {
  const auto& S = s.schedule();
  const std::uint64_t H = S.a64(top);
  std::vector<Symbol> w(H + 1, 0);
  for (int n = 1; n < top; ++n) {
    const auto& D = s.decomposition(n);
    for (std::uint64_t j = S.a64(n) + 1; j <= S.a64(n + 1); ++j) {
      int m = 0;
      for (int k = 1; k <= n && !m; ++k)
        if ((j - 1) % S.period64(k) < S.a64(k)) m = k;
      if (m) {
        w[j] = w[(j - 1) % S.period64(m) + 1];
      } else {
        int t = 0;
        while (BigInt(j) > D.intervals[static_cast<std::size_t>(t)].hi) ++t;
        w[j] = interval_symbol(static_cast<IntervalTag>(t));
      }
    }
  }
  return w;
}

}  // namespace

TEST(SeparatorParams, PaperConstants) {
  const auto& s = paper();
  EXPECT_EQ(s.schedule().a(1), 3332);
  EXPECT_EQ(s.schedule().b(3), 3332);
  EXPECT_EQ(s.schedule().a(2), BigInt(710545668));
  EXPECT_EQ(*s.schedule().delta_infinity(), Rational(1, 32));
  EXPECT_TRUE(s.params().violations.empty());
}

TEST(SeparatorParams, Rejections) {
  EXPECT_THROW(make_separator_params(16, 64, LevelRule::pow2(5)), ParameterError);
  EXPECT_THROW(make_separator_params(17, 63, LevelRule::pow2(5)), ParameterError);
  EXPECT_THROW(make_separator_params(17, 64, LevelRule::pow2(4)), ParameterError);  // delta = 1/16
  const auto toy = make_separator_params(1, 1, LevelRule::pow2(1), true, 5);
  EXPECT_FALSE(toy.violations.empty());
  // odd d_n is rejected even in toy mode
  EXPECT_THROW(make_separator_params(17, 64, LevelRule::list({3, 9, 27, 81, 243, 729}), true), ParameterError);
}

TEST(Decomposition, LevelOne) {
  const auto& D = paper().decomposition(1);
  EXPECT_EQ(D.p, BigInt(235532417));
  EXPECT_EQ(D.q, BigInt(235745663));
  EXPECT_TRUE(D.flags.empty());
  const BigInt P1 = BigInt(3332) * 64;
  // |I01| = (L K d_1 + 1) a_1
  EXPECT_EQ(D[IntervalTag::I01].length(), (BigInt(64) * 17 * 64 + 1) * 3332);
  // I12c = [p, q] has length between P_1/2 and P_1
  EXPECT_GE(2 * D[IntervalTag::I12c].length(), P1);
  EXPECT_LE(D[IntervalTag::I12c].length(), P1);
  EXPECT_EQ(D[IntervalTag::I03].hi, paper().schedule().a(2));
}

TEST(Decomposition, IntervalsAreContiguous) {
  for (int n = 1; n <= 4; ++n) {
    const auto& D = paper().decomposition(n);
    EXPECT_EQ(D.intervals[0].lo, 1);
    for (int i = 1; i < kIntervalCount; ++i)
      EXPECT_EQ(D.intervals[static_cast<std::size_t>(i)].lo, D.intervals[static_cast<std::size_t>(i - 1)].hi + 1);
    EXPECT_EQ(D.intervals[kIntervalCount - 1].hi, paper().schedule().a(n + 1));
  }
}

TEST(Decomposition, ColoursInOrder) {
  const std::vector<int> want = {0, 1, 2, 1, 0, 2, 0};
  for (int i = 0; i < kIntervalCount; ++i) EXPECT_EQ(interval_symbol(static_cast<IntervalTag>(i)), want[static_cast<std::size_t>(i)]);
  EXPECT_EQ(parse_interval_tag("I22"), IntervalTag::I22);
  EXPECT_FALSE(parse_interval_tag("I99"));
}

TEST(IntervalProperties, PaperLevelsOneToThree) {
  for (int n = 1; n <= 3; ++n) {
    const auto r = verify_pq(paper(), n);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
  }
}

TEST(Evaluation, BaseFillIsZero) {
  for (std::uint64_t j = 1; j <= 3332; ++j) ASSERT_EQ(paper().at(j), 0);
}

TEST(Evaluation, MatchesMaterializedTinyInstance) {
  const auto s = tiny();
  const auto w = materialize(s, 4);
  for (std::uint64_t j = 1; j < w.size(); ++j) ASSERT_EQ(s.at(j), w[j]) << j;
}

TEST(Evaluation, BigPathAgreesWithFastPath) {
  std::mt19937_64 g(7);
  const auto& s = paper();
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t j = 1 + g() % s.schedule().a64(3);
    ASSERT_EQ(s.at(j), s.at_big(BigInt(j)));
  }
}

TEST(PrefixCounts, MatchMaterializedTinyInstance) {
  const auto s = tiny();
  const auto w = materialize(s, 4);
  Counts c;
  for (std::uint64_t j = 1; j < w.size(); ++j) {
    ++c[w[j]];
    if (j % 97 == 0 || j + 1 == w.size()) {
      ASSERT_EQ(s.prefix(j), c) << j;
    }
  }
  EXPECT_EQ(to_u64(s.prefix_big(BigInt(w.size() - 1))), c);
}

TEST(PrefixCounts, PaperPrefixAgreesWithPointwise) {
  const auto& s = paper();
  Counts c;
  for (std::uint64_t j = 1; j <= 2'000'000; ++j) {
    ++c[s.at(j)];
    if (j % 4099 == 0) {
      ASSERT_EQ(s.prefix(j), c) << j;
    }
  }
}

TEST(PrefixCounts, RandomIntervalsAgreeWithBigEngine) {
  std::mt19937_64 g(3);
  const auto& s = paper();
  const std::uint64_t A = s.schedule().a64(3);
  for (int i = 0; i < 500; ++i) {
    std::uint64_t lo = 1 + g() % A, hi = 1 + g() % A;
    if (lo > hi) std::swap(lo, hi);
    ASSERT_EQ(s.counts(lo, hi), to_u64(s.counts_big(BigInt(lo), BigInt(hi))));
  }
}

TEST(Evaluation, PeriodicAtEveryLevel) {
  const auto& s = paper();
  std::mt19937_64 g(11);
  for (int m = 1; m <= 2; ++m) {
    const std::uint64_t P = s.schedule().period64(m);
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t j = 1 + g() % s.schedule().a64(m);
      for (std::uint64_t k = 1; k <= 5; ++k) ASSERT_EQ(s.at(j), s.at(j + k * P));
    }
  }
}

TEST(Classify, Examples) {
  const auto& s = paper();
  const auto& D = s.decomposition(1);
  EXPECT_EQ(classify(s, BigInt(1), 1), IntervalTag::I01);
  EXPECT_EQ(classify(s, D.p, 1), IntervalTag::I12c);
  EXPECT_EQ(classify(s, D.q + 1, 1), IntervalTag::I12);
  EXPECT_EQ(classify(s, s.schedule().a(2), 1), IntervalTag::I03);
  EXPECT_THROW(classify(s, s.schedule().a(2) + 1, 1), std::out_of_range);
}

TEST(Averages, CentralIntervalIsNearV2) {
  const auto& s = paper();
  const auto& D = s.decomposition(1);
  const auto c = s.counts(to_u64(D.p), to_u64(D.q));
  EXPECT_TRUE(in_ball(c, 2, 8));
  EXPECT_FALSE(in_ball(c, 0, 8));
}
