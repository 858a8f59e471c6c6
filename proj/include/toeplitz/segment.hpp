#ifndef TOEPLITZ_SEGMENT_HPP
#define TOEPLITZ_SEGMENT_HPP

// Toeplitz sequence whose rotation set is a segment of positive length in
// the line v + R v^perp.
//
// For rational v = (p1/q, p2/q) every quantity the construction compares is
// rational after multiplying by |v| q^2, so the generator works with the
// integer "scaled displacement"
//
//   D~(l, j) = D(l, j) |v| q^2 = <psi([l,j]), (p1, p2)> q - (j - l + 1)(p1^2 + p2^2)
//
// and every comparison against M, 9 delta, or the bound 2nM + 1 is exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toeplitz/arith.hpp"
#include "toeplitz/blocks.hpp"
#include "toeplitz/report.hpp"
#include "toeplitz/sequence.hpp"

namespace toeplitz {

using i128 = __int128;

struct SegmentParams {
  Rational vx, vy;
  // v = (p1, p2) / q in lowest common terms.
  std::int64_t p1 = 0, p2 = 0, q = 1;
  std::int64_t norm_sq_num = 0;  // p1^2 + p2^2, so |v|^2 = norm_sq_num / q^2

  // Scaled per-symbol increments of D and the scaled constant M.
  std::int64_t inc[3] = {0, 0, 0};
  std::int64_t M_scaled = 0;

  int t = 0;
  std::uint64_t a1 = 0;
  std::uint64_t K = 0;
  BlockSchedule schedule;

  double norm() const { return std::sqrt(static_cast<double>(norm_sq_num)) / static_cast<double>(q); }
  double alpha() const { return to_double(vx) / norm(); }
  double beta() const { return to_double(vy) / norm(); }
  double M() const { return norm() + std::max(alpha(), beta()); }
  /// |v|^2.
  Rational norm_sq() const { return Rational(BigInt(norm_sq_num), BigInt(q) * q); }
  /// delta = |v| / (10 max(alpha, beta)) = |v|^2 / (10 max(v_x, v_y)).
  Rational delta() const { return norm_sq() / (10 * std::max(vx, vy)); }
  /// The scaled value of 1 is sqrt(norm_sq_num) q, irrational in general.
  double scale() const { return norm() * static_cast<double>(q) * static_cast<double>(q); }
  double unscale(std::int64_t d) const { return static_cast<double>(d) / scale(); }

  /// |D| <= c M + 1 for the scaled value D~, decided exactly.
  bool abs_within(std::int64_t d_scaled, std::int64_t c) const {
    const i128 excess = i128(d_scaled < 0 ? -d_scaled : d_scaled) - i128(c) * M_scaled;
    if (excess <= 0) return true;
    return excess * excess <= i128(norm_sq_num) * q * q;
  }

  json to_json() const;
};

namespace detail {

inline std::string decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::int64_t checked_i64(const BigInt& x, const char* what) {
  if (x > std::numeric_limits<std::int64_t>::max() / 4 || x < std::numeric_limits<std::int64_t>::min() / 4)
    throw ParameterError(std::string("denominator of v too large for exact scaled arithmetic (") +
                         what + ")");
  return static_cast<std::int64_t>(x);
}

}  // namespace detail

inline json SegmentParams::to_json() const {
  json j;
  j["v"] = {to_string(vx), to_string(vy)};
  j["norm_sq"] = to_string(norm_sq());
  j["alpha_times_norm"] = to_string(vx);
  j["beta_times_norm"] = to_string(vy);
  j["M_times_norm"] = to_string(norm_sq() + std::max(vx, vy));
  j["norm_approx"] = detail::decimal(norm());
  j["alpha_approx"] = detail::decimal(alpha());
  j["beta_approx"] = detail::decimal(beta());
  j["M_approx"] = detail::decimal(M());
  j["t"] = t;
  j["a1"] = std::to_string(a1);
  j["K"] = std::to_string(K);
  j["delta"] = to_string(delta());
  j["delta_infinity"] = to_string(*schedule.delta_infinity());
  j["displacement_scale"] = "|v| q^2 with q = " + std::to_string(q);
  return j;
}

/// Derives alpha, beta, M, t, a_1 and K from v. `a1_override` may only raise
/// a_1 above its minimal admissible value.
inline SegmentParams derive_segment_params(const Rational& vx, const Rational& vy,
                                           std::optional<std::uint64_t> a1_override = std::nullopt,
                                           int max_level = BlockSchedule::kDefaultMaxLevel) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (!(vx > 0 && vy > 0 && vx + vy < 1))
    throw ParameterError("v must lie in the open simplex spanned by (0,0), (1,0), (0,1)");
  const Rational norm_sq = vx * vx + vy * vy;
  // |v| <= min(alpha, beta)  <=>  |v|^2 <= min(v_x, v_y)
  if (norm_sq > std::min(vx, vy))
    throw ParameterError("v is not in V: requires |v| <= min(alpha, beta), i.e. |v|^2 <= min(v_x, v_y)");

  const BigInt q_big = boost::multiprecision::lcm(denominator(vx), denominator(vy));
  SegmentParams P{.vx = vx,
                  .vy = vy,
                  .schedule = BlockSchedule(1, LevelRule::constant(1), LevelRule::pow2(0), 1)};
  P.q = detail::checked_i64(q_big, "q");
  P.p1 = detail::checked_i64(numerator(vx) * (q_big / denominator(vx)), "p1");
  P.p2 = detail::checked_i64(numerator(vy) * (q_big / denominator(vy)), "p2");
  const BigInt n2 = BigInt(P.p1) * P.p1 + BigInt(P.p2) * P.p2;
  P.norm_sq_num = detail::checked_i64(n2, "|v|^2");
  detail::checked_i64(BigInt(std::max(P.p1, P.p2)) * P.q + n2, "M");
  P.inc[0] = -P.norm_sq_num;
  P.inc[1] = P.p1 * P.q - P.norm_sq_num;
  P.inc[2] = P.p2 * P.q - P.norm_sq_num;
  P.M_scaled = P.norm_sq_num + std::max(P.p1, P.p2) * P.q;

  // Smallest t with 2^-t <= delta.
  const Rational delta = P.delta();
  P.t = 0;
  while (Rational(BigInt(1), BigInt(1) << P.t) > delta) ++P.t;

  // a_1 >= 2M/|v| + 1 = 2 M~ / (p1^2 + p2^2) + 1
  const std::uint64_t a1_min = static_cast<std::uint64_t>(
      (2 * P.M_scaled + P.norm_sq_num - 1) / P.norm_sq_num + 1);
  if (a1_override && *a1_override < a1_min)
    throw ParameterError("a_1 override " + std::to_string(*a1_override) +
                         " violates a_1 >= 2M/|v| + 1 (minimum " + std::to_string(a1_min) + ")");
  P.a1 = a1_override.value_or(a1_min);
  P.K = P.a1 - 1;
  P.schedule = BlockSchedule(P.a1, LevelRule::constant(1), LevelRule::pow2(P.t), max_level);
  return P;
}

/// Result of generating a prefix of the segment sequence.
struct SegmentSequence {
  SegmentParams params;
  MaterializedSequence sequence;
  int complete_levels = 0;
  /// D~(1, a_k) for every complete level k (index 0 unused).
  std::vector<std::int64_t> level_end_displacement;
  std::uint64_t max_iota_in_runup = 0;
  std::uint64_t runups = 0;

  /// D~(1, j) from symbol counts.
  std::int64_t displacement_prefix(std::uint64_t j) const {
    return scaled_displacement(params, sequence.prefix(j));
  }

  static std::int64_t scaled_displacement(const SegmentParams& P, const Counts& c) {
    return static_cast<std::int64_t>(c[0]) * P.inc[0] + static_cast<std::int64_t>(c[1]) * P.inc[1] +
           static_cast<std::int64_t>(c[2]) * P.inc[2];
  }
};

/// Thrown when rule (III) has no admissible completion; cannot happen when
/// the parameter conditions hold.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Greedy level-by-level construction. Level n fills [a_{n-1}+1, a_n]: blocks
/// of lower level are copies of [1, a_k]; free positions get 0 or iota
/// (1 on odd levels, 2 on even ones) so that D(1, j) stays in [0, M] away
/// from blocks, and the K positions before each block steer D(1, m) into
/// [-D(1, a_k), M - D(1, a_k)] with the smallest feasible D at every step.
class SegmentGenerator {
 public:
  SegmentGenerator(SegmentParams params, std::uint64_t horizon)
      : P_(std::move(params)), horizon_(horizon) {
    symbols_.reserve(horizon_);
    dend_.assign(static_cast<std::size_t>(P_.schedule.max_level()) + 1, 0);
  }

  /// Generates level n; levels < n must already be complete.
  void generate_level(int n) {
    if (n != complete_ + 1) throw std::logic_error("levels must be generated in order");
    if (done()) return;
    const Symbol iota = (n % 2 == 1) ? 1 : 2;
    const auto& S = P_.schedule;
    S.walk_level(
        n, horizon_,
        [&](std::uint64_t lo, int k) {
          const std::uint64_t len = S.a64(k);
          for (std::uint64_t i = 0; i < len && lo + i <= horizon_; ++i) emit(symbols_[i], RuleKind::copy);
          D_ += dend_[static_cast<std::size_t>(k)];
        },
        [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t next_lo, int next_k) {
          std::uint64_t runup = hi + 1;
          if (next_k != 0) {
            if (next_lo < lo + P_.K)
              throw ConsistencyError("free run shorter than K before block at " + std::to_string(next_lo));
            runup = next_lo - P_.K;
          }
          for (std::uint64_t j = lo; j < runup && j <= horizon_; ++j) rule_two(iota, j);
          if (next_k != 0 && runup <= horizon_) rule_three(iota, runup, next_k);
        });
    if (S.a64(n) <= horizon_) {
      complete_ = n;
      dend_[static_cast<std::size_t>(n)] = D_;
      if (D_ < 0 || D_ > P_.M_scaled)
        throw ConsistencyError("D(1, a_" + std::to_string(n) + ") left [0, M]");
    }
  }

  bool done() const { return symbols_.size() >= horizon_; }
  int complete_levels() const { return complete_; }

  SegmentSequence finish() && {
    SegmentSequence out{.params = std::move(P_),
                        .sequence = MaterializedSequence(std::move(symbols_)),
                        .complete_levels = complete_,
                        .level_end_displacement = std::move(dend_),
                        .max_iota_in_runup = max_iota_,
                        .runups = runups_};
    return out;
  }

 private:
  enum class RuleKind { copy, two, three };

  void emit(Symbol s, RuleKind kind) {
    symbols_.push_back(s);
    if (kind != RuleKind::copy) D_ += P_.inc[s];
  }

  void rule_two(Symbol iota, std::uint64_t j) {
    const std::int64_t with_zero = D_ + P_.inc[0];
    if (with_zero >= 0 && with_zero <= P_.M_scaled) {
      emit(0, RuleKind::two);
      return;
    }
    const std::int64_t with_iota = D_ + P_.inc[iota];
    if (with_iota < 0 || with_iota > P_.M_scaled)
      throw ConsistencyError("rule (II) infeasible at position " + std::to_string(j));
    emit(iota, RuleKind::two);
  }

  // Chooses the K run-up symbols before the block of level k starting at
  // runup + K. feasible[i][u]: after i steps with u iotas, the target is
  // still reachable while staying inside [-M, M].
  void rule_three(Symbol iota, std::uint64_t runup, int k) {
    const std::size_t K = static_cast<std::size_t>(P_.K);
    const std::int64_t down = P_.inc[0], up = P_.inc[iota], M = P_.M_scaled;
    const std::int64_t dk = dend_[static_cast<std::size_t>(k)];
    const std::int64_t lo = -dk, hi = M - dk;
    auto value = [&](std::size_t i, std::size_t u) {
      return D_ + static_cast<std::int64_t>(u) * up + static_cast<std::int64_t>(i - u) * down;
    };
    feasible_.assign((K + 1) * (K + 1), 0);
    auto at = [&](std::size_t i, std::size_t u) -> std::uint8_t& { return feasible_[i * (K + 1) + u]; };
    for (std::size_t u = 0; u <= K; ++u) {
      const std::int64_t v = value(K, u);
      at(K, u) = (v >= lo && v <= hi && v >= -M && v <= M);
    }
    for (std::size_t i = K; i-- > 0;)
      for (std::size_t u = 0; u <= i; ++u) {
        const std::int64_t v = value(i, u);
        const bool in_band = (i == 0) || (v >= -M && v <= M);
        at(i, u) = in_band && (at(i + 1, u) || at(i + 1, u + 1));
      }
    if (!at(0, 0))
      throw ConsistencyError("rule (III) target window unreachable before position " +
                             std::to_string(runup + K));
    std::size_t u = 0;
    for (std::size_t i = 0; i < K; ++i) {
      Symbol s = 0;
      if (!at(i + 1, u)) {
        s = iota;
        ++u;
      }
      if (runup + i <= horizon_) emit(s, RuleKind::three);
    }
    // Positions beyond the horizon are not emitted; D_ is no longer used then.
    max_iota_ = std::max<std::uint64_t>(max_iota_, u);
    ++runups_;
  }

  SegmentParams P_;
  std::uint64_t horizon_;
  std::vector<Symbol> symbols_;
  std::vector<std::int64_t> dend_;
  std::vector<std::uint8_t> feasible_;
  std::int64_t D_ = 0;
  int complete_ = 0;
  std::uint64_t max_iota_ = 0;
  std::uint64_t runups_ = 0;
};

/// Generates the prefix [1, horizon] of the segment sequence.
inline SegmentSequence generate_segment(const SegmentParams& params, std::uint64_t horizon) {
  SegmentGenerator gen(params, horizon);
  for (int n = 1; !gen.done(); ++n) {
    if (n > params.schedule.max_level()) throw std::out_of_range("horizon needs more levels than cached");
    gen.generate_level(n);
  }
  return std::move(gen).finish();
}

/// D(l, j) in scaled units; D(j+1, j) = 0.
inline std::int64_t displacement(const SegmentSequence& s, std::uint64_t l, std::uint64_t j) {
  return SegmentSequence::scaled_displacement(s.params, s.sequence.counts(l, j));
}

/// Bound |D(i, j)| <= 2nM + 1 for all 0 < j - i <= a_n with i, j in
/// [range_lo, range_hi]. Every pair is covered: for each i the extreme values
/// of D(1, j) over the window are tracked with monotone deques.
template <symbol_sequence Seq>
Report check_pis(const SegmentParams& P, const Seq& seq, int n, std::uint64_t range_lo,
                 std::uint64_t range_hi) {
  Report rep("segment_displacement_bound", "|D(i,j)| <= 2nM+1 whenever 0 < j-i <= a_n");
  const std::uint64_t an = P.schedule.a64(n);
  range_hi = std::min(range_hi, seq.horizon());
  rep.budget["range"] = {range_lo, range_hi};
  rep.statistics["level"] = n;
  rep.statistics["a_n"] = an;
  rep.statistics["bound_approx"] = 2.0 * n * P.M() + 1.0;
  rep.statistics["mode"] = "exhaustive";
  if (range_hi <= range_lo) {
    rep.statistics["pairs"] = 0;
    return rep;
  }

  // prefix[x] = D~(1, x) for x in [range_lo - 1, range_hi]
  const std::uint64_t base = range_lo - 1;
  std::vector<std::int64_t> prefix(range_hi - base + 1);
  Counts c = base == 0 ? Counts{} : seq.counts(1, base);
  prefix[0] = SegmentSequence::scaled_displacement(P, c);
  for (std::uint64_t x = range_lo; x <= range_hi; ++x) {
    ++c[seq.at(x)];
    prefix[x - base] = SegmentSequence::scaled_displacement(P, c);
  }
  auto D1 = [&](std::uint64_t x) { return prefix[x - base]; };

  std::deque<std::uint64_t> maxq, minq;
  std::uint64_t next_j = range_lo + 1;
  std::int64_t worst = 0;
  std::uint64_t pairs = 0;
  for (std::uint64_t i = range_lo; i < range_hi; ++i) {
    const std::uint64_t jmax = std::min(range_hi, i + an);
    for (; next_j <= jmax; ++next_j) {
      while (!maxq.empty() && D1(maxq.back()) <= D1(next_j)) maxq.pop_back();
      maxq.push_back(next_j);
      while (!minq.empty() && D1(minq.back()) >= D1(next_j)) minq.pop_back();
      minq.push_back(next_j);
    }
    while (maxq.front() <= i) maxq.pop_front();
    while (minq.front() <= i) minq.pop_front();
    pairs += jmax - i;
    const std::int64_t base_val = D1(i - 1);
    const std::int64_t hi_d = D1(maxq.front()) - base_val;
    const std::int64_t lo_d = D1(minq.front()) - base_val;
    const std::int64_t local = std::max(hi_d, -lo_d);
    worst = std::max(worst, local);
    if (!P.abs_within(local, 2 * n)) {
      const std::uint64_t j = hi_d >= -lo_d ? maxq.front() : minq.front();
      rep.fail({{"i", i}, {"j", j}, {"D_approx", P.unscale(D1(j) - base_val)}});
    }
  }
  rep.statistics["pairs"] = pairs;
  rep.statistics["max_abs_D_scaled"] = worst;
  rep.statistics["max_abs_D_approx"] = P.unscale(worst);
  return rep;
}

struct EndpointFrequencies {
  Rational freq1, freq2;
  int expected_symbol = 1;  // 1 on odd levels, 2 on even ones
  bool meets_expectation = false;
};

/// Frequencies of 1s and 2s on [1, a_n]; on odd levels the 1-frequency is
/// expected to exceed 9 delta, on even levels the 2-frequency.
template <symbol_sequence Seq>
EndpointFrequencies endpoint_frequencies(const SegmentParams& P, const Seq& seq, int n) {
  const std::uint64_t an = P.schedule.a64(n);
  if (an > seq.horizon()) throw std::out_of_range("level not materialized");
  const Counts c = seq.counts(1, an);
  EndpointFrequencies f;
  f.freq1 = Rational(BigInt(c[1]), BigInt(an));
  f.freq2 = Rational(BigInt(c[2]), BigInt(an));
  f.expected_symbol = (n % 2 == 1) ? 1 : 2;
  const Rational& dominant = f.expected_symbol == 1 ? f.freq1 : f.freq2;
  f.meets_expectation = dominant > 9 * P.delta();
  return f;
}

/// Endpoint frequencies on every level inside the horizon, plus the drop
/// freq1([1,a_1]) - freq1([1,a_2]) > 6 delta.
template <symbol_sequence Seq>
Report check_endpoint_frequencies(const SegmentParams& P, const Seq& seq) {
  Report rep("segment_endpoint_frequencies", "dominant endpoint frequency > 9 delta on each level");
  const Rational delta = P.delta();
  json levels = json::array();
  for (int n = 1; n <= P.schedule.max_level() && P.schedule.a64(n) <= seq.horizon(); ++n) {
    const auto f = endpoint_frequencies(P, seq, n);
    levels.push_back({{"level", n},
                      {"freq1", to_string(f.freq1)},
                      {"freq2", to_string(f.freq2)},
                      {"expected_symbol", f.expected_symbol},
                      {"meets_expectation", f.meets_expectation}});
    if (!f.meets_expectation) rep.fail({{"level", n}, {"freq1", to_string(f.freq1)}, {"freq2", to_string(f.freq2)}});
  }
  if (levels.empty()) return Report::skipped(rep.check_name, rep.anchor, "horizon shorter than a_1");
  rep.statistics["delta"] = to_string(delta);
  rep.statistics["levels"] = levels;
  if (P.schedule.a64(2) <= seq.horizon()) {
    const auto f1 = endpoint_frequencies(P, seq, 1), f2 = endpoint_frequencies(P, seq, 2);
    const Rational drop = f1.freq1 - f2.freq1;
    rep.statistics["freq1_drop"] = to_string(drop);
    rep.statistics["freq1_drop_exceeds_6delta"] = drop > 6 * delta;
    if (!(drop > 6 * delta)) rep.fail({{"freq1_drop", to_string(drop)}, {"six_delta", to_string(6 * delta)}});
  }
  return rep;
}

/// |D(1, j)| <= M depth(j) for every j in the materialized prefix.
inline Report check_depth_bound(const SegmentSequence& s) {
  Report rep("segment_depth_bound", "|D(1,j)| <= M depth(j)");
  const auto& P = s.params;
  Counts c;
  int max_depth = 0;
  for (std::uint64_t j = 1; j <= s.sequence.horizon(); ++j) {
    ++c[s.sequence.at(j)];
    const std::int64_t d = SegmentSequence::scaled_displacement(P, c);
    const int depth = P.schedule.depth(j);
    max_depth = std::max(max_depth, depth);
    if ((d < 0 ? -d : d) > P.M_scaled * depth)
      rep.fail({{"j", j}, {"depth", depth}, {"D_approx", P.unscale(d)}});
  }
  rep.statistics["positions"] = s.sequence.horizon();
  rep.statistics["max_depth"] = max_depth;
  return rep;
}

/// Windows J of length a_n satisfy |<rho(J), v/|v|> - |v|| <= (2nM + 1)/a_n,
/// i.e. |D(J)| <= 2nM + 1.
template <symbol_sequence Seq>
Report check_window_geometry(const SegmentParams& P, const Seq& seq, int n) {
  Report rep("segment_window_geometry", "|<rho(J), v/|v|> - |v|| <= (2nM+1)/a_n for |J| = a_n");
  const std::uint64_t an = P.schedule.a64(n);
  const std::uint64_t H = seq.horizon();
  rep.statistics["level"] = n;
  std::uint64_t windows = 0;
  std::int64_t worst = 0;
  if (an <= H) {
    Counts c = seq.counts(1, an);
    for (std::uint64_t lo = 1;; ++lo) {
      ++windows;
      const std::int64_t d = SegmentSequence::scaled_displacement(P, c);
      worst = std::max(worst, d < 0 ? -d : d);
      if (!P.abs_within(d, 2 * n)) rep.fail({{"window", {lo, lo + an - 1}}, {"D_approx", P.unscale(d)}});
      if (lo + an > H) break;
      --c[seq.at(lo)];
      ++c[seq.at(lo + an)];
    }
  }
  rep.statistics["windows"] = windows;
  rep.statistics["max_abs_D_approx"] = P.unscale(worst);
  rep.statistics["max_deviation_approx"] = an ? P.unscale(worst) / static_cast<double>(an) : 0.0;
  return rep;
}

}  // namespace toeplitz

#endif  // TOEPLITZ_SEGMENT_HPP
