#ifndef TOEPLITZ_INTERIOR_HPP
#define TOEPLITZ_INTERIOR_HPP

// Toeplitz sequence whose rotation set contains the shrunken simplex
//
//   Delta_delta = { s v_1 + t v_2 : s, t > delta, s + t < 1 - delta },  delta = delta_infinity,
//
// obtained by filling each level so that the average over [1, a_n] is exactly
// a prescribed grid vector rho_n of Delta_delta. The targets follow a
// deterministic two-dimensional Kronecker sequence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "toeplitz/arith.hpp"
#include "toeplitz/blocks.hpp"
#include "toeplitz/report.hpp"
#include "toeplitz/rotation.hpp"
#include "toeplitz/sequence.hpp"

namespace toeplitz {

struct InteriorParams {
  BlockSchedule schedule;
  Rational delta;
  /// Index of the first low-discrepancy point used.
  std::uint64_t target_seed = 0;

  json to_json() const {
    return {{"a1", to_string(schedule.a(1))}, {"delta", to_string(delta)}, {"target_seed", target_seed}};
  }
};

/// Smallest and largest admissible counts c for one coordinate / the sum:
/// c > delta a  and  c1 + c2 < (1 - delta) a.
struct GridBounds {
  std::int64_t min_single;
  std::int64_t max_sum;
};

inline GridBounds grid_bounds(const Rational& delta, std::uint64_t a) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const Rational lo = delta * a;
  const Rational hi = (1 - delta) * a;
  // smallest integer > lo, largest integer < hi
  BigInt min_single = numerator(lo) / denominator(lo) + 1;
  BigInt max_sum = numerator(hi) / denominator(hi);
  if (Rational(max_sum) == hi) max_sum -= 1;
  return {static_cast<std::int64_t>(min_single), static_cast<std::int64_t>(max_sum)};
}

inline InteriorParams make_interior_params(BigInt a1, LevelRule d_rule, std::uint64_t target_seed = 0,
                                           int max_level = BlockSchedule::kDefaultMaxLevel) {
  InteriorParams P{.schedule = BlockSchedule(std::move(a1), LevelRule::constant(1), std::move(d_rule), max_level),
                   .delta = 0,
                   .target_seed = target_seed};
  const auto dinf = P.schedule.delta_infinity();
  if (!dinf) throw ParameterError("delta_infinity must be finite");
  if (*dinf >= Rational(1, 10))
    throw ParameterError("delta = delta_infinity < 1/10 violated (delta_infinity = " + to_string(*dinf) + ")");
  P.delta = *dinf;
  const auto g = grid_bounds(P.delta, to_u64(P.schedule.a(1)));
  if (2 * g.min_single > g.max_sum)
    throw ParameterError("Delta_delta contains no point of the 1/a_1 grid; increase a_1");
  return P;
}

struct TargetVector {
  int level = 0;
  std::uint64_t a = 0;
  /// Counts of symbols 0, 1, 2 on [1, a_n]; rho_n = (c1, c2) / a_n.
  Counts counts;
  double raw_s = 0, raw_t = 0;
  /// The nearest interior grid point differs from rounding the raw point.
  bool snapped = false;
  /// Inherited counts forced a move away from the nearest interior grid point.
  bool clamped = false;

  Rational x() const { return Rational(BigInt(counts[1]), BigInt(a)); }
  Rational y() const { return Rational(BigInt(counts[2]), BigInt(a)); }

  json to_json() const {
    return {{"level", level},
            {"rho", {to_string(x()), to_string(y())}},
            {"counts", {counts[0], counts[1], counts[2]}},
            {"raw", {raw_s, raw_t}},
            {"snapped", snapped},
            {"clamped", clamped}};
  }
};

/// Strict membership of (c1, c2)/a in Delta_delta.
inline bool in_delta_region(const Rational& delta, std::uint64_t a, std::uint64_t c1, std::uint64_t c2) {
  const Rational s{BigInt(c1), BigInt(a)}, t{BigInt(c2), BigInt(a)};
  return s > delta && t > delta && s + t < 1 - delta;
}

/// Point k of the additive recurrence with the plastic-number increments
/// (1/g, 1/g^2), the two-dimensional analogue of the golden-ratio sequence.
inline std::pair<double, double> kronecker_point(std::uint64_t k) {
  constexpr double g = 1.32471795724474602596;
  constexpr double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  const double kd = static_cast<double>(k);
  double x = 0.5 + a1 * kd, y = 0.5 + a2 * kd;
  return {x - std::floor(x), y - std::floor(y)};
}

/// The n-th accepted point of the Kronecker sequence mapped into the
/// bounding box of Delta_delta, with rejection outside it.
inline std::pair<double, double> raw_target(const InteriorParams& P, int n) {
  const double d = to_double(P.delta);
  const double w = 1.0 - 3.0 * d;
  int accepted = 0;
  for (std::uint64_t k = P.target_seed;; ++k) {
    auto [u, v] = kronecker_point(k);
    const double s = d + u * w, t = d + v * w;
    if (s + t < 1.0 - d && ++accepted == n) return {s, t};
  }
}

/// Nearest grid point (c1, c2) of (1/a)Z^2 strictly inside Delta_delta with
/// c_i >= inherited_i, minimizing the L1 distance in (c0, c1, c2) count space
/// to (round(s a), round(t a)); ties go to the smaller c1, then smaller c2.
inline std::optional<std::pair<std::int64_t, std::int64_t>> nearest_grid_point(
    const Rational& delta, std::uint64_t a, double s, double t, const Counts& inherited) {
  const auto g = grid_bounds(delta, a);
  const auto A = static_cast<std::int64_t>(a);
  const std::int64_t t1 = std::llround(s * static_cast<double>(a));
  const std::int64_t t2 = std::llround(t * static_cast<double>(a));
  const std::int64_t lo1 = std::max<std::int64_t>(g.min_single, static_cast<std::int64_t>(inherited[1]));
  const std::int64_t lo2 = std::max<std::int64_t>(g.min_single, static_cast<std::int64_t>(inherited[2]));
  const std::int64_t sum_hi = std::min<std::int64_t>(g.max_sum, A - static_cast<std::int64_t>(inherited[0]));
  std::optional<std::pair<std::int64_t, std::int64_t>> best;
  std::int64_t best_cost = 0;
  for (std::int64_t c1 = lo1; c1 + lo2 <= sum_hi; ++c1) {
    const std::int64_t hi2 = sum_hi - c1;
    // cost(c2) = |c1 - t1| + |c2 - t2| + |(c1 + c2) - (t1 + t2)| is convex in
    // c2 with minimizers between t2 and t1 + t2 - c1.
    const std::int64_t m_lo = std::min(t2, t1 + t2 - c1), m_hi = std::max(t2, t1 + t2 - c1);
    std::int64_t c2 = std::clamp(m_lo, lo2, hi2);
    if (c2 < m_lo) c2 = std::min(m_lo, hi2);
    if (c2 > m_hi) c2 = std::max(m_hi, lo2);
    const std::int64_t cost = std::llabs(c1 - t1) + std::llabs(c2 - t2) + std::llabs(c1 + c2 - t1 - t2);
    if (!best || cost < best_cost) {
      best = {c1, c2};
      best_cost = cost;
    }
  }
  return best;
}

/// Target vector for level n given the counts already fixed on [1, a_n] n B_{n-1}.
inline TargetVector next_target(const InteriorParams& P, int n, const Counts& existing) {
  const std::uint64_t a = P.schedule.a64(n);
  if (a == BlockSchedule::kSaturated) throw std::out_of_range("level too large to materialize");
  TargetVector tv;
  tv.level = n;
  tv.a = a;
  std::tie(tv.raw_s, tv.raw_t) = raw_target(P, n);
  const auto free_choice = nearest_grid_point(P.delta, a, tv.raw_s, tv.raw_t, Counts{});
  if (!free_choice) throw ParameterError("Delta_delta has no grid point at resolution 1/a_" + std::to_string(n));
  const auto chosen = nearest_grid_point(P.delta, a, tv.raw_s, tv.raw_t, existing);
  if (!chosen) throw std::runtime_error("no achievable target at level " + std::to_string(n));
  tv.snapped = free_choice->first != std::llround(tv.raw_s * static_cast<double>(a)) ||
               free_choice->second != std::llround(tv.raw_t * static_cast<double>(a));
  tv.clamped = *chosen != *free_choice;
  tv.counts[1] = static_cast<std::uint64_t>(chosen->first);
  tv.counts[2] = static_cast<std::uint64_t>(chosen->second);
  tv.counts[0] = a - tv.counts[1] - tv.counts[2];
  return tv;
}

struct InteriorSequence {
  InteriorParams params;
  MaterializedSequence sequence;
  std::vector<TargetVector> targets;  // targets[n-1] is rho_n
  int levels = 0;
};

/// Distributes `need` symbols over `slots` positions by smooth weighted
/// round robin: each step the symbol with the largest accumulated credit is
/// placed (ties in the order 1, 2, 0).
inline std::vector<Symbol> interleave(const Counts& need) {
  const std::uint64_t F = need.total();
  std::vector<Symbol> out;
  out.reserve(F);
  std::int64_t credit[3] = {0, 0, 0};
  static constexpr Symbol order[3] = {1, 2, 0};
  for (std::uint64_t i = 0; i < F; ++i) {
    for (Symbol s : order) credit[s] += static_cast<std::int64_t>(need[s]);
    Symbol pick = order[0];
    for (Symbol s : order)
      if (credit[s] > credit[pick]) pick = s;
    credit[pick] -= static_cast<std::int64_t>(F);
    out.push_back(pick);
  }
  return out;
}

/// Generates levels 1..levels completely.
inline InteriorSequence generate_interior(const InteriorParams& P, int levels) {
  const auto& S = P.schedule;
  if (levels < 1 || levels > S.max_level()) throw std::out_of_range("level count");
  const std::uint64_t H = S.a64(levels);
  if (H == BlockSchedule::kSaturated) throw std::out_of_range("level too large to materialize");
  std::vector<Symbol> sym;
  sym.reserve(H);
  InteriorSequence out{.params = P, .sequence = {}, .targets = {}, .levels = levels};

  for (int n = 1; n <= levels; ++n) {
    Counts fixed;
    for (std::uint64_t i = 0; i < sym.size(); ++i) ++fixed[sym[i]];  // [1, a_{n-1}]
    std::vector<Span> runs;
    std::vector<std::uint64_t> block_at;  // positions where a block copy begins, paired with level
    std::vector<int> block_level;
    S.walk_level(
        n, H,
        [&](std::uint64_t lo, int k) {
          block_at.push_back(lo);
          block_level.push_back(k);
          const Counts c = [&] {
            Counts r;
            for (std::uint64_t i = 0; i < S.a64(k); ++i) ++r[sym[i]];
            return r;
          }();
          fixed += c;
        },
        [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t, int) { runs.push_back({lo, hi}); });

    const TargetVector tv = next_target(P, n, fixed);
    const Counts need = tv.counts - fixed;
    const std::vector<Symbol> fill = interleave(need);

    // Lay out level n left to right.
    std::size_t bi = 0, ri = 0, fi = 0;
    std::uint64_t j = sym.size() + 1;
    const std::uint64_t an = S.a64(n);
    while (j <= an) {
      if (bi < block_at.size() && block_at[bi] == j) {
        const std::uint64_t len = S.a64(block_level[bi]);
        for (std::uint64_t i = 0; i < len; ++i) sym.push_back(sym[i]);
        j += len;
        ++bi;
      } else {
        const Span r = runs.at(ri++);
        for (std::uint64_t x = r.lo; x <= r.hi; ++x) sym.push_back(fill.at(fi++));
        j = r.hi + 1;
      }
    }
    if (fi != fill.size()) throw std::logic_error("free positions and fill length disagree");
    out.targets.push_back(tv);
  }
  out.sequence = MaterializedSequence(std::move(sym));

  for (const auto& tv : out.targets) {
    const Counts c = out.sequence.counts(1, tv.a);
    if (!(c == tv.counts)) throw std::logic_error("level average differs from its target");
  }
  return out;
}

inline std::vector<TargetVector> targets_from_json(const json& arr) {
  std::vector<TargetVector> out;
  for (const auto& t : arr) {
    TargetVector tv;
    tv.level = t.at("level").get<int>();
    for (int s = 0; s < kAlphabetSize; ++s)
      tv.counts[s] = t.at("counts").at(static_cast<std::size_t>(s)).get<std::uint64_t>();
    tv.a = tv.counts.total();
    tv.raw_s = t.at("raw").at(0).get<double>();
    tv.raw_t = t.at("raw").at(1).get<double>();
    tv.snapped = t.value("snapped", false);
    tv.clamped = t.value("clamped", false);
    out.push_back(tv);
  }
  return out;
}

/// (1/a_n) psi([1, a_n]) = rho_n exactly, rho_n strictly inside Delta_delta,
/// and the hull of the targets has positive area.
template <symbol_sequence Seq>
Report check_interior(const InteriorParams& P, const Seq& seq, const std::vector<TargetVector>& targets) {
  Report rep("interior_targets", "(1/a_n) psi([1,a_n]) = rho_n in Delta_delta; targets span an open set");
  std::vector<RotationVector> pts;
  json lv = json::array();
  for (const auto& t : targets) {
    if (t.a != P.schedule.a64(t.level)) rep.fail({{"level", t.level}, {"problem", "target length differs from a_n"}});
    if (t.a > seq.horizon()) {
      rep.fail({{"level", t.level}, {"problem", "level beyond the horizon"}});
      continue;
    }
    const RotationVector got = rho(seq, 1, t.a);
    const RotationVector want{t.counts[1], t.counts[2], t.a};
    const bool exact = got == want;
    const bool inside = in_delta_region(P.delta, t.a, t.counts[1], t.counts[2]);
    if (!exact) rep.fail({{"level", t.level}, {"rho", got.to_json()}, {"target", want.to_json()}});
    if (!inside) rep.fail({{"level", t.level}, {"problem", "target outside Delta_delta"}, {"target", want.to_json()}});
    lv.push_back({{"level", t.level}, {"rho", want.to_json()}, {"exact", exact}, {"strictly_inside", inside}});
    pts.push_back(want);
  }
  Rational area = 0;
  if (!pts.empty()) area = hull(pts).area;
  if (!(area > 0)) rep.fail({{"problem", "targets are collinear"}, {"hull_area", to_string(area)}});
  rep.statistics["delta"] = to_string(P.delta);
  rep.statistics["levels"] = lv;
  rep.statistics["hull_area"] = to_string(area);
  // Covering radius of the targets over a 64 x 64 grid of Delta_delta; reported only.
  const double d = to_double(P.delta);
  double radius = 0;
  if (!pts.empty())
    for (int i = 0; i <= 64; ++i)
      for (int k = 0; i + k <= 64; ++k) {
        const double s = d + (1 - 3 * d) * i / 64.0, t = d + (1 - 3 * d) * k / 64.0;
        double best = 2;
        for (const auto& r : pts) best = std::min(best, std::hypot(r.dx() - s, r.dy() - t));
        radius = std::max(radius, best);
      }
  rep.statistics["epsilon_net_radius"] = radius;
  rep.statistics["density"] = "finite-n approximant; density in Delta_delta is not asserted";
  return rep;
}

}  // namespace toeplitz

#endif  // TOEPLITZ_INTERIOR_HPP
