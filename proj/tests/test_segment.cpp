#include <gtest/gtest.h>

#include <vector>

#include "toeplitz/rotation.hpp"
#include "toeplitz/segment.hpp"

using namespace toeplitz;

namespace {

const SegmentParams& quarter() {
  static const SegmentParams P = derive_segment_params(Rational(1, 4), Rational(1, 4));
  return P;
}

const SegmentSequence& quarter_seq() {
  static const SegmentSequence s = generate_segment(quarter(), 60'000);
  return s;
}

// Rational oracle for the displacement: X = D |v| = <psi, v> - len |v|^2.
struct RationalD {
  Rational vx, vy, n2, mv;  // mv = M |v| = |v|^2 + max(vx, vy)

  explicit RationalD(const Rational& x, const Rational& y)
      : vx(x), vy(y), n2(x * x + y * y), mv(n2 + std::max(x, y)) {}

  Rational X(const Counts& c) const { return vx * BigInt(c[1]) + vy * BigInt(c[2]) - n2 * BigInt(c.total()); }

  // |D| <= k M + 1  <=>  |X| - k M|v| <= |v|
  bool within(const Rational& X, int k) const {
    const Rational y = abs(X) - k * mv;
    return y <= 0 || y * y <= n2;
  }
};

}  // namespace

TEST(SegmentParams, QuarterQuarter) {
  const auto& P = quarter();
  EXPECT_EQ(P.t, 5);
  EXPECT_EQ(P.a1, 7u);
  EXPECT_EQ(P.K, 6u);
  EXPECT_EQ(P.delta(), Rational(1, 20));
  EXPECT_EQ(P.norm_sq(), Rational(1, 8));
  EXPECT_NEAR(P.M(), 0.3535533905932738 + 0.7071067811865476, 1e-12);
  EXPECT_NEAR(P.alpha(), 0.7071067811865476, 1e-12);
  EXPECT_EQ(P.schedule.a(2), 455);
  EXPECT_EQ(P.schedule.a(3), 58695);
  EXPECT_EQ(*P.schedule.delta_infinity(), Rational(1, 32));
}

TEST(SegmentParams, Rejections) {
  EXPECT_THROW(derive_segment_params(Rational(3, 4), Rational(1, 2)), ParameterError);  // outside simplex
  EXPECT_THROW(derive_segment_params(Rational(0), Rational(1, 4)), ParameterError);
  EXPECT_THROW(derive_segment_params(Rational(1, 2), Rational(1, 10)), ParameterError);  // |v| > beta
  EXPECT_THROW(derive_segment_params(Rational(1, 4), Rational(1, 4), 6), ParameterError);
  EXPECT_EQ(derive_segment_params(Rational(1, 4), Rational(1, 4), 9).a1, 9u);
}

TEST(SegmentParams, SmallestTIsChosen) {
  for (auto [x, y] : {std::pair{Rational(1, 4), Rational(1, 4)}, {Rational(1, 5), Rational(1, 6)},
                      {Rational(1, 3), Rational(1, 4)}}) {
    const auto P = derive_segment_params(x, y);
    const Rational d = P.delta();
    EXPECT_LE(Rational(1, BigInt(1) << P.t), d);
    EXPECT_GT(Rational(1, BigInt(1) << (P.t - 1)), d);
  }
}

TEST(SegmentSequence, StartsWithAlternatingBlock) {
  const auto& s = quarter_seq();
  std::string head;
  for (std::uint64_t j = 1; j <= 7; ++j) head += static_cast<char>('0' + s.sequence.at(j));
  // D starts at 0: a 0 would leave [0, M], so 1 and 0 alternate.
  EXPECT_EQ(head, "1010101");
  EXPECT_EQ(s.complete_levels, 3);  // 60000 >= a_3
}

TEST(SegmentSequence, LevelEndsLandInZeroToM) {
  const auto& s = quarter_seq();
  for (int k = 1; k <= s.complete_levels; ++k) {
    const auto d = s.displacement_prefix(s.params.schedule.a64(k));
    EXPECT_GE(d, 0);
    EXPECT_LE(d, s.params.M_scaled);
  }
}

TEST(SegmentSequence, DepthBoundAgainstRationalOracle) {
  const auto& s = quarter_seq();
  const RationalD R(Rational(1, 4), Rational(1, 4));
  Counts c;
  for (std::uint64_t j = 1; j <= s.sequence.horizon(); ++j) {
    ++c[s.sequence.at(j)];
    const int depth = s.params.schedule.depth(j);
    // |D| <= M depth, i.e. |X| <= depth M|v|
    ASSERT_LE(abs(R.X(c)), depth * R.mv) << "j = " << j;
  }
  EXPECT_TRUE(check_depth_bound(s).passed());
}

TEST(SegmentSequence, PairBoundAgainstBruteForce) {
  const auto& s = quarter_seq();
  const RationalD R(Rational(1, 4), Rational(1, 4));
  const std::uint64_t hi = 455;
  for (int n = 1; n <= 2; ++n) {
    const std::uint64_t an = s.params.schedule.a64(n);
    bool all_ok = true;
    for (std::uint64_t i = 1; i <= hi; ++i) {
      Counts c;
      for (std::uint64_t j = i; j <= std::min(hi, i + an); ++j) {
        ++c[s.sequence.at(j)];
        if (j > i && !R.within(R.X(c), 2 * n)) all_ok = false;
      }
    }
    EXPECT_TRUE(all_ok);
    EXPECT_EQ(check_pis(s.params, s.sequence, n, 1, hi).passed(), all_ok);
  }
}

TEST(SegmentSequence, PairBoundOnLongPrefix) {
  const auto& s = quarter_seq();
  for (int n = 1; n <= 2; ++n) {
    const auto r = check_pis(s.params, s.sequence, n, 1, s.sequence.horizon());
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
  }
}

TEST(SegmentSequence, WindowGeometry) {
  const auto& s = quarter_seq();
  const auto r = check_window_geometry(s.params, s.sequence, 2);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.statistics["windows"], s.sequence.horizon() - 455 + 1);
}

TEST(SegmentSequence, WindowAveragesNearTheLine) {
  // <rho(J), v/|v|> within (4M+1)/a_2 of |v| for windows of length a_2.
  const auto& s = quarter_seq();
  const RationalD R(Rational(1, 4), Rational(1, 4));
  const auto cloud = window_cloud(s.sequence, 455, 1, 20'000, 13);
  for (const auto& [i, r] : cloud.points) {
    const Counts c{{r.len - r.x - r.y, r.x, r.y}};
    ASSERT_TRUE(R.within(R.X(c), 4)) << i;
  }
}

TEST(SegmentSequence, EndpointFrequencies) {
  const auto& s = quarter_seq();
  const auto f1 = endpoint_frequencies(s.params, s.sequence, 1);
  const auto f2 = endpoint_frequencies(s.params, s.sequence, 2);
  EXPECT_EQ(f1.freq1, Rational(4, 7));
  EXPECT_TRUE(f1.meets_expectation);
  EXPECT_EQ(f2.expected_symbol, 2);
  EXPECT_TRUE(f2.meets_expectation);
  EXPECT_EQ(f2.freq1, Rational(8, 455));
  EXPECT_GT(f1.freq1 - f2.freq1, 6 * s.params.delta());
  EXPECT_TRUE(check_endpoint_frequencies(s.params, s.sequence).passed());
}

TEST(SegmentSequence, IsToeplitz) {
  const auto& s = quarter_seq();
  ToeplitzOptions o;
  o.samples = 20'000;
  o.sample_range = 20'000;
  EXPECT_TRUE(toeplitz_check(s.sequence, s.params.schedule, o).passed());
}

TEST(SegmentSequence, OtherDirections) {
  for (auto [x, y] : {std::pair{Rational(1, 5), Rational(1, 6)}, {Rational(1, 3), Rational(1, 4)}}) {
    const auto P = derive_segment_params(x, y);
    const auto s = generate_segment(P, std::min<std::uint64_t>(P.schedule.a64(2) * 3, 200'000));
    EXPECT_TRUE(check_depth_bound(s).passed());
    EXPECT_TRUE(check_pis(P, s.sequence, 1, 1, s.sequence.horizon()).passed());
  }
}

TEST(SegmentSequence, AllZeroFailsExpectations) {
  const auto& P = quarter();
  const auto zeros = constant_sequence(20'000, 0);
  // pairs within a_1 = 7 stay below 2M + 1 even for zeros; a_2 = 455 does not
  EXPECT_TRUE(check_pis(P, zeros, 1, 1, 20'000).passed());
  EXPECT_EQ(check_pis(P, zeros, 2, 1, 20'000).status, Status::fail);
  EXPECT_FALSE(endpoint_frequencies(P, zeros, 1).meets_expectation);
  EXPECT_EQ(check_endpoint_frequencies(P, zeros).status, Status::fail);
}

TEST(SegmentSequence, PrefixIsStableUnderLongerHorizon) {
  const auto short_s = generate_segment(quarter(), 1000);
  const auto& long_s = quarter_seq();
  for (std::uint64_t j = 1; j <= 1000; ++j) ASSERT_EQ(short_s.sequence.at(j), long_s.sequence.at(j));
}
