#ifndef TOEPLITZ_SEPARATOR_HPP
#define TOEPLITZ_SEPARATOR_HPP

// Toeplitz sequence whose rotation set separates the plane.
//
// a_1 = b_n = (3L + 4) K. Going from level n to n + 1, [1, a_{n+1}] is split
// into seven consecutive intervals
//
//   I01 | I11 | I12c = [p_n, q_n] | I12 | I02 | I22 | I03
//
// and every position of [1, a_{n+1}] \ B_n receives the symbol of its interval
// (0 for I0*, 1 for I11 and I12, 2 for I12c and I22). Level-1 content is all 0.
//
// Because a_2 is already ~7e8 in the reference parameters, the sequence is
// never stored. Symbols are evaluated pointwise by reducing the index into
// the first block of its fill level, and symbol counts on [1, x] come from
// an exact recursion over the level structure (PrefixEngine) in O(levels)
// arithmetic operations.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "toeplitz/arith.hpp"
#include "toeplitz/blocks.hpp"
#include "toeplitz/report.hpp"
#include "toeplitz/sequence.hpp"

namespace toeplitz {

enum class IntervalTag : int { I01 = 0, I11, I12c, I12, I02, I22, I03 };
inline constexpr int kIntervalCount = 7;

inline const char* to_string(IntervalTag t) {
  static constexpr const char* names[] = {"I01", "I11", "I12c", "I12", "I02", "I22", "I03"};
  return names[static_cast<int>(t)];
}

inline std::optional<IntervalTag> parse_interval_tag(std::string_view s) {
  for (int i = 0; i < kIntervalCount; ++i)
    if (s == to_string(static_cast<IntervalTag>(i))) return static_cast<IntervalTag>(i);
  return std::nullopt;
}

/// Fill symbol of free positions in an interval.
inline Symbol interval_symbol(IntervalTag t) {
  switch (t) {
    case IntervalTag::I01:
    case IntervalTag::I02:
    case IntervalTag::I03: return 0;
    case IntervalTag::I11:
    case IntervalTag::I12: return 1;
    case IntervalTag::I12c:
    case IntervalTag::I22: return 2;
  }
  return 0;
}

struct SeparatorParams {
  std::uint64_t K = 17;
  std::uint64_t L = 64;
  BlockSchedule schedule;
  bool toy_mode = false;
  /// Conditions that failed; only possible in toy mode.
  std::vector<std::string> violations;

  json to_json() const {
    json j;
    j["K"] = K;
    j["L"] = L;
    j["a1"] = to_string(schedule.a(1));
    j["b"] = to_string(schedule.b(1));
    j["toy_mode"] = toy_mode;
    if (auto di = schedule.delta_infinity()) j["delta_infinity"] = to_string(*di);
    json v = json::array();
    for (const auto& s : violations) v.push_back(s);
    j["violations"] = v;
    return j;
  }
};

/// Builds and validates the parameters. Outside toy mode every condition of
/// the construction is enforced; in toy mode they are recorded instead.
inline SeparatorParams make_separator_params(std::uint64_t K, std::uint64_t L, LevelRule d_rule,
                                             bool toy_mode = false, int max_level = 6) {
  if (K < 1 || L < 1) throw ParameterError("K and L must be positive");
  const BigInt a1 = BigInt(3 * L + 4) * K;
  SeparatorParams P{.K = K,
                    .L = L,
                    .schedule = BlockSchedule(a1, LevelRule::constant(a1), std::move(d_rule), max_level),
                    .toy_mode = toy_mode,
                    .violations = {}};
  const auto& S = P.schedule;
  std::vector<std::string> problems;
  for (int n = 1; n <= S.max_level(); ++n)
    if (S.d(n) % 2 != 0)
      throw ParameterError("d_" + std::to_string(n) + " must be even");
  if (K < 17) problems.push_back("K >= 17 violated (K = " + std::to_string(K) + ")");
  if (L < 64) problems.push_back("L >= 64 violated (L = " + std::to_string(L) + ")");
  const auto dinf = S.delta_infinity();
  if (!dinf || *dinf > Rational(1, 32))
    problems.push_back("delta_infinity <= 1/32 violated" +
                       (dinf ? " (delta_infinity = " + to_string(*dinf) + ")" : std::string(" (diverges)")));
  BigInt partial = 0;
  for (int n = 1; n <= S.max_level(); ++n) {
    if (n < S.max_level() && S.a(n + 1) < 8 * S.a(n) * S.b(n))
      problems.push_back("a_{n+1} >= 8 a_n b_n violated at n = " + std::to_string(n));
    if (2 * partial > S.period(n))
      problems.push_back("sum_{j<n} a_j d_j <= a_n d_n / 2 violated at n = " + std::to_string(n));
    partial += S.period(n);
  }
  if (!problems.empty() && !toy_mode) {
    std::string msg = "separator parameters violate:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ParameterError(msg);
  }
  P.violations = std::move(problems);
  return P;
}

/// The seven intervals of [1, a_{n+1}] at level n.
template <class Int>
struct BasicDecomposition {
  int level = 0;
  Int p{}, q{};
  std::array<BasicInterval<Int>, kIntervalCount> intervals{};
  /// Structural problems (empty or misordered intervals); toy mode only.
  std::vector<std::string> flags;

  const BasicInterval<Int>& operator[](IntervalTag t) const { return intervals[static_cast<int>(t)]; }
  BasicInterval<Int> star() const { return {(*this)[IntervalTag::I11].lo, (*this)[IntervalTag::I12].hi}; }

  /// Tag of the interval containing j; j must lie in [1, a_{n+1}].
  IntervalTag classify(const Int& j) const {
    for (int i = 0; i < kIntervalCount; ++i)
      if (j <= intervals[static_cast<std::size_t>(i)].hi) return static_cast<IntervalTag>(i);
    throw std::out_of_range("index outside [1, a_{n+1}]");
  }

  json to_json() const {
    json j;
    j["level"] = level;
    auto str = [](const Int& x) {
      if constexpr (std::is_same_v<Int, BigInt>) return to_string(x);
      else return std::to_string(x);
    };
    j["p"] = str(p);
    j["q"] = str(q);
    json arr = json::array();
    for (int i = 0; i < kIntervalCount; ++i) {
      const auto& iv = intervals[static_cast<std::size_t>(i)];
      arr.push_back({{"tag", to_string(static_cast<IntervalTag>(i))}, {"lo", str(iv.lo)}, {"hi", str(iv.hi)}});
    }
    j["intervals"] = arr;
    return j;
  }
};

using IntervalDecomposition = BasicDecomposition<BigInt>;

inline IntervalDecomposition decompose(const SeparatorParams& P, int n) {
  const auto& S = P.schedule;
  if (n < 1 || n + 1 > S.max_level())
    throw std::out_of_range("decompose needs levels n and n + 1 cached");
  const BigInt K = P.K, L = P.L;
  const BigInt& an = S.a(n);
  const BigInt& dn = S.d(n);
  const BigInt& Pn = S.period(n);
  BigInt half_sum = 0;
  for (int j = 1; j <= n; ++j) half_sum += S.period(j) / 2;

  IntervalDecomposition D;
  D.level = n;
  D.p = (L + 1) * K * Pn - Pn + 1 + half_sum;
  D.q = (L + 1) * K * Pn + Pn - half_sum - 1;
  using T = IntervalTag;
  auto set = [&](T t, BigInt lo, BigInt hi) { D.intervals[static_cast<int>(t)] = {std::move(lo), std::move(hi)}; };
  set(T::I01, 1, (L * K * dn + 1) * an);
  set(T::I11, (L * K * dn + 1) * an + 1, D.p - 1);
  set(T::I12c, D.p, D.q);
  set(T::I12, D.q + 1, (L + 2) * K * Pn);
  set(T::I02, (L + 2) * K * Pn + 1, ((2 * L + 2) * K * dn + 1) * an);
  set(T::I22, ((2 * L + 2) * K * dn + 1) * an + 1, (2 * L + 4) * K * Pn);
  set(T::I03, (2 * L + 4) * K * Pn + 1, S.a(n + 1));
  for (int i = 0; i < kIntervalCount; ++i) {
    const auto& iv = D.intervals[static_cast<std::size_t>(i)];
    if (iv.lo > iv.hi) D.flags.push_back(std::string(to_string(static_cast<T>(i))) + " is empty");
    if (i > 0 && iv.lo != D.intervals[static_cast<std::size_t>(i - 1)].hi + 1)
      D.flags.push_back(std::string(to_string(static_cast<T>(i))) + " does not follow its predecessor");
  }
  return D;
}

inline std::optional<BasicDecomposition<std::uint64_t>> narrow(const IntervalDecomposition& D) {
  BasicDecomposition<std::uint64_t> out;
  out.level = D.level;
  auto p = try_u64(D.p), q = try_u64(D.q);
  if (!p || !q) return std::nullopt;
  out.p = *p;
  out.q = *q;
  for (int i = 0; i < kIntervalCount; ++i) {
    auto lo = try_u64(D.intervals[static_cast<std::size_t>(i)].lo);
    auto hi = try_u64(D.intervals[static_cast<std::size_t>(i)].hi);
    if (!lo || !hi) return std::nullopt;
    out.intervals[static_cast<std::size_t>(i)] = {*lo, *hi};
  }
  out.flags = D.flags;
  return out;
}

/// Exact symbol counts on prefixes [1, x] for x <= a_{top}.
///
/// full(x) = counts on [1, x]; inB(n, x) = counts on [1, x] n B_n. With
/// P = a_n d_n and B_n periodic of period P:
///
///   inB(n, x)  = floor(x / P) inB(n, P) + inB(n, x mod P)
///   inB(n, r)  = full(r)                                   for r <= a_n
///              = full(a_n) + inB(n-1, r) - inB(n-1, a_n)    for a_n < r < P
///   full(x)    = inB(s, x) + free symbols of [1, x] \ B_s  for a_s < x <= a_{s+1}
///
/// and the free part is read off the level-s decomposition, where the number
/// of B_s positions before each interval is tabulated.
template <class Int>
class PrefixEngine {
 public:
  using C = BasicCounts<Int>;

  PrefixEngine() = default;

  /// Builds tables for levels 1..top; requires decompositions 1..top-1.
  PrefixEngine(const BlockSchedule& S, const std::vector<BasicDecomposition<Int>>& decomps, int top)
      : top_(top) {
    a_.assign(static_cast<std::size_t>(top + 1), Int{});
    P_ = a_;
    full_a_.assign(a_.size(), C{});
    inB_P_ = inB_prev_a_ = full_a_;
    steps_.resize(a_.size());
    for (int n = 1; n <= top; ++n) {
      a_[u(n)] = S.template a_as<Int>(n);
      P_[u(n)] = S.template period_as<Int>(n);
    }
    full_a_[1] = C::unit(0, a_[1]);
    inB_P_[1] = full_a_[1];
    for (int n = 1; n <= top; ++n) {
      if (n > 1) {
        full_a_[u(n)] = full(a_[u(n)]);
        inB_prev_a_[u(n)] = inB(n - 1, a_[u(n)]);
        // only reachable for x <= a_{n+1}; skip if it cannot be represented
        if (n < top || std::is_same_v<Int, BigInt>)
          inB_P_[u(n)] = full_a_[u(n)] + inB(n - 1, P_[u(n)]) - inB_prev_a_[u(n)];
      }
      if (n < top) build_step(n, decomps.at(u(n)));
    }
  }

  int top() const { return top_; }
  const Int& limit() const { return a_[u(top_)]; }

  C full(const Int& x) const {
    if (x == 0) return C{};
    int n = 1;
    while (x > a_[u(n)]) {
      if (++n > top_) throw std::out_of_range("prefix beyond the engine's levels");
    }
    if (n == 1) return C::unit(0, x);
    const int s = n - 1;
    const Step& st = steps_[u(s)];
    C res = inB(s, x);
    const Int inb_total = res.total();
    int i = 0;
    while (x > st.hi[static_cast<std::size_t>(i)]) ++i;
    const auto k = static_cast<std::size_t>(i);
    res += st.free_before[k];
    const Int span = x - st.lo[k] + 1;
    const Int free_here = span - (inb_total - st.inB_before[k]);
    res[st.symbol[k]] += free_here;
    return res;
  }

  C inB(int n, const Int& x) const {
    if (n == 0) return C{};
    const Int& P = P_[u(n)];
    const Int q = x / P;
    const Int r = x % P;
    C res = q == 0 ? C{} : q * inB_P_[u(n)];
    if (r <= a_[u(n)]) return res + full(r);
    return res + full_a_[u(n)] + inB(n - 1, r) - inB_prev_a_[u(n)];
  }

 private:
  struct Step {
    std::array<Int, kIntervalCount> lo{}, hi{}, inB_before{};
    std::array<C, kIntervalCount> free_before{};
    std::array<int, kIntervalCount> symbol{};
  };

  static std::size_t u(int n) { return static_cast<std::size_t>(n); }

  void build_step(int s, const BasicDecomposition<Int>& D) {
    Step& st = steps_[u(s)];
    C acc{};
    for (int i = 0; i < kIntervalCount; ++i) {
      const auto k = static_cast<std::size_t>(i);
      st.lo[k] = D.intervals[k].lo;
      st.hi[k] = D.intervals[k].hi;
      st.symbol[k] = interval_symbol(static_cast<IntervalTag>(i));
      st.inB_before[k] = inB(s, st.lo[k] - 1).total();
      st.free_before[k] = acc;
      const Int inB_inside = inB(s, st.hi[k]).total() - st.inB_before[k];
      acc[st.symbol[k]] += (st.hi[k] - st.lo[k] + 1) - inB_inside;
    }
  }

  int top_ = 0;
  std::vector<Int> a_, P_;
  std::vector<C> full_a_, inB_P_, inB_prev_a_;
  std::vector<Step> steps_;
};

/// The plane-separating sequence with pointwise evaluation and exact interval
/// counts. Decompositions and engines are built once; all queries are const.
class SeparatorSequence {
 public:
  explicit SeparatorSequence(SeparatorParams params) : P_(std::move(params)) {
    const auto& S = P_.schedule;
    const int top = S.max_level();
    decomps_.resize(static_cast<std::size_t>(top));
    for (int n = 1; n < top; ++n) decomps_[static_cast<std::size_t>(n)] = decompose(P_, n);
    engine_ = PrefixEngine<BigInt>(S, decomps_, top);

    // 64-bit fast path for every level whose a_n fits.
    int top64 = 0;
    while (top64 + 1 <= top && S.a64(top64 + 1) != BlockSchedule::kSaturated) ++top64;
    decomps64_.resize(static_cast<std::size_t>(std::max(top64, 1)));
    for (int n = 1; n < top64; ++n) {
      auto d = narrow(decomps_[static_cast<std::size_t>(n)]);
      if (!d) {
        top64 = n;
        break;
      }
      decomps64_[static_cast<std::size_t>(n)] = *d;
    }
    top64_ = top64;
    if (top64_ >= 1) engine64_ = PrefixEngine<std::uint64_t>(S, decomps64_, top64_);
    horizon_ = top64_ >= 1 ? S.a64(top64_) : 0;
  }

  const SeparatorParams& params() const { return P_; }
  const BlockSchedule& schedule() const { return P_.schedule; }

  const IntervalDecomposition& decomposition(int n) const {
    if (n < 1 || n >= static_cast<int>(decomps_.size())) throw std::out_of_range("decomposition level");
    return decomps_[static_cast<std::size_t>(n)];
  }

  /// Largest 64-bit index served by at() / counts().
  std::uint64_t horizon() const { return horizon_; }

  Symbol at(std::uint64_t j) const {
    if (j < 1) throw std::out_of_range("indices start at 1");
    if (j > horizon_) return at_big(BigInt(j));
    const auto& S = P_.schedule;
    const int m = S.fill_level(j);
    if (m == 1) return 0;
    const std::uint64_t r = (j - 1) % S.period64(m) + 1;
    return interval_symbol(decomps64_[static_cast<std::size_t>(m - 1)].classify(r));
  }

  Symbol at_big(const BigInt& j) const {
    if (j < 1) throw std::out_of_range("indices start at 1");
    const auto& S = P_.schedule;
    const int m = S.fill_level(j);
    if (m == 1) return 0;
    if (m - 1 >= static_cast<int>(decomps_.size())) throw std::out_of_range("index beyond cached levels");
    const BigInt r = (j - 1) % S.period(m) + 1;
    return interval_symbol(decomps_[static_cast<std::size_t>(m - 1)].classify(r));
  }

  Counts prefix(std::uint64_t x) const {
    if (x <= horizon_) return engine64_.full(x);
    return to_u64(engine_.full(BigInt(x)));
  }

  Counts counts(std::uint64_t lo, std::uint64_t hi) const {
    if (lo < 1 || lo > hi + 1) throw std::out_of_range("bad interval");
    return prefix(hi) - prefix(lo - 1);
  }

  BigCounts prefix_big(const BigInt& x) const { return engine_.full(x); }
  BigCounts counts_big(const BigInt& lo, const BigInt& hi) const {
    return prefix_big(hi) - prefix_big(lo - 1);
  }

 private:
  SeparatorParams P_;
  std::vector<IntervalDecomposition> decomps_;
  std::vector<BasicDecomposition<std::uint64_t>> decomps64_;
  PrefixEngine<BigInt> engine_;
  PrefixEngine<std::uint64_t> engine64_;
  int top64_ = 0;
  std::uint64_t horizon_ = 0;
};

static_assert(symbol_sequence<SeparatorSequence>);

/// Tag of the level-n interval containing j in [1, a_{n+1}].
inline IntervalTag classify(const SeparatorSequence& seq, const BigInt& j, int n) {
  if (j < 1 || j > seq.schedule().a(n + 1)) throw std::out_of_range("j outside [1, a_{n+1}]");
  return seq.decomposition(n).classify(j);
}

namespace detail {

// Distance from x to the nearest level-k block (0 inside a block).
inline BigInt distance_to_blocks(const BlockSchedule& S, const BigInt& x, int k) {
  const BigInt r = (x - 1) % S.period(k);
  if (r < S.a(k)) return 0;
  const BigInt after_prev = r - S.a(k) + 1;
  const BigInt before_next = S.period(k) - r;
  return std::min(after_prev, before_next);
}

inline bool starts_block(const BlockSchedule& S, const BigInt& x, int n) {
  return (x - 1) % S.period(n) == 0;
}
inline bool ends_block(const BlockSchedule& S, const BigInt& x, int n) {
  return (x - 1) % S.period(n) == S.a(n) - 1;
}

}  // namespace detail

/// Exact checks of the interval properties at level n:
///   PQ1  |I01| = |I02| = |I03| = (LKd_n+1)a_n, each starting and ending with a level-n block
///   PQ2  (K-1)a_n d_n <= |I11|, |I12| <= K a_n d_n
///   PQ3  a_n d_n / 2 <= |I12c| <= a_n d_n
///   PQ4  I12c is centred on a level-n block (see below) and its translate by
///        (L+2)K a_n d_n lies in I22
///   PQ5  p_n, q_n are at distance >= a_k d_k / 4 from every level-k block, k <= n
///   PQ6  |I*| = |I22| = (2Kd_n - 1)a_n
///
/// PQ4: |I12c| is odd while a_n is even for the reference parameters, so no
/// block can be centred exactly. The check requires a level-n block B inside
/// I12c whose midpoint is within (a_n + 1)/2 of the midpoint of I12c, and
/// reports both margins.
inline Report verify_pq(const SeparatorSequence& seq, int n) {
  const auto& P = seq.params();
  const auto& S = P.schedule;
  const auto& D = seq.decomposition(n);
  Report rep("separator_interval_properties", "interval properties PQ1-PQ6 of the seven-interval split");
  rep.statistics["level"] = n;
  json props = json::object();
  auto record = [&](const std::string& name, bool ok, json detail) {
    props[name] = ok ? "pass" : "fail";
    if (!ok) rep.fail({{"property", name}, {"detail", std::move(detail)}});
  };
  using T = IntervalTag;
  const BigInt K = P.K, L = P.L;
  const BigInt& an = S.a(n);
  const BigInt& dn = S.d(n);
  const BigInt& Pn = S.period(n);

  bool partition_ok = D.flags.empty() && D[T::I01].lo == 1 && D[T::I03].hi == S.a(n + 1);
  record("partition", partition_ok, D.to_json());

  {
    const BigInt want = (L * K * dn + 1) * an;
    bool ok = true;
    json bad = json::array();
    for (T t : {T::I01, T::I02, T::I03}) {
      const auto& iv = D[t];
      const bool good = iv.length() == want && detail::starts_block(S, iv.lo, n) &&
                        detail::ends_block(S, iv.hi, n);
      if (!good) {
        ok = false;
        bad.push_back({{"interval", to_string(t)}, {"length", to_string(iv.length())}});
      }
    }
    record("PQ1", ok, {{"expected_length", to_string(want)}, {"offending", bad}});
  }
  {
    bool ok = true;
    json lens = json::object();
    for (T t : {T::I11, T::I12}) {
      const BigInt len = D[t].length();
      lens[to_string(t)] = to_string(len);
      ok = ok && (K - 1) * Pn <= len && len <= K * Pn;
    }
    record("PQ2", ok, lens);
  }
  {
    const BigInt len = D[T::I12c].length();
    record("PQ3", Pn <= 2 * len && len <= Pn, {{"length", to_string(len)}, {"a_n d_n", to_string(Pn)}});
  }
  {
    const auto& c = D[T::I12c];
    // first level-n block start >= p
    const BigInt r = (c.lo - 1) % Pn;
    const BigInt start = r == 0 ? c.lo : c.lo - r + Pn;
    const BigInt end = start + an - 1;
    const bool inside = end <= c.hi;
    const BigInt left = start - c.lo;
    const BigInt right = c.hi - end;
    const BigInt skew = left > right ? left - right : right - left;  // twice the midpoint offset
    const bool centred = inside && skew <= an + 1;
    const BigInt shift = (L + 2) * K * Pn;
    const auto& i22 = D[T::I22];
    const bool translate_ok = c.lo + shift >= i22.lo && c.hi + shift <= i22.hi;
    rep.statistics["PQ4_block"] = {to_string(start), to_string(end)};
    rep.statistics["PQ4_margins"] = {to_string(left), to_string(right)};
    record("PQ4", centred && translate_ok,
           {{"block", {to_string(start), to_string(end)}},
            {"margins", {to_string(left), to_string(right)}},
            {"translate_in_I22", translate_ok}});
  }
  {
    bool ok = true;
    json worst = json::array();
    for (int k = 1; k <= n; ++k) {
      for (const BigInt* x : {&D.p, &D.q}) {
        const BigInt dist = detail::distance_to_blocks(S, *x, k);
        if (4 * dist < S.period(k)) {
          ok = false;
          worst.push_back({{"k", k}, {"point", to_string(*x)}, {"distance", to_string(dist)}});
        }
      }
    }
    record("PQ5", ok, worst);
  }
  {
    const BigInt want = (2 * K * dn - 1) * an;
    const BigInt star = D.star().length();
    const BigInt i22 = D[T::I22].length();
    record("PQ6", star == want && i22 == want,
           {{"I_star", to_string(star)}, {"I22", to_string(i22)}, {"expected", to_string(want)}});
  }
  rep.statistics["properties"] = props;
  rep.statistics["toy_mode"] = P.toy_mode;
  return rep;
}

}  // namespace toeplitz

#endif  // TOEPLITZ_SEPARATOR_HPP
