#ifndef TOEPLITZ_BLOCKS_HPP
#define TOEPLITZ_BLOCKS_HPP

// General block structure of the Toeplitz constructions.
//
// A schedule is a triple (a_1, (b_n), (d_n)) with d_{n+1} a multiple of d_n.
// It determines a_{n+1} = (b_n d_n + 1) a_n and the level-n sets
//
//   A_n = [1, a_n] + a_n d_n N,     B_n = A_1 u ... u A_n.
//
// The maximal intervals of A_n are the blocks of level n; blocks of different
// levels are either nested or disjoint. All indices are 1-based. Index
// arithmetic is provided both for std::uint64_t (saturating level tables,
// used for materialized prefixes) and for BigInt.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "toeplitz/arith.hpp"
#include "toeplitz/report.hpp"

namespace toeplitz {

template <class Int>
struct BasicInterval {
  Int lo{};
  Int hi{};

  Int length() const { return hi - lo + 1; }
  bool contains(const Int& j) const { return lo <= j && j <= hi; }
  friend bool operator==(const BasicInterval&, const BasicInterval&) = default;
};

using IndexInterval = BasicInterval<BigInt>;
using Span = BasicInterval<std::uint64_t>;

/// Per-level integer rule for b_n or d_n.
struct LevelRule {
  enum class Kind { constant, list, pow2 };

  Kind kind = Kind::constant;
  BigInt value = 1;             // constant
  std::vector<BigInt> values;   // list, values[0] is level 1
  int offset = 0;               // pow2: 2^(n + offset)

  static LevelRule constant(BigInt v) {
    LevelRule r;
    r.kind = Kind::constant;
    r.value = std::move(v);
    return r;
  }
  static LevelRule list(std::vector<BigInt> vs) {
    LevelRule r;
    r.kind = Kind::list;
    r.values = std::move(vs);
    return r;
  }
  static LevelRule pow2(int off) {
    LevelRule r;
    r.kind = Kind::pow2;
    r.offset = off;
    return r;
  }

  std::optional<int> levels_defined() const {
    if (kind == Kind::list) return static_cast<int>(values.size());
    return std::nullopt;
  }

  BigInt at(int n) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::list:
        if (n < 1 || n > static_cast<int>(values.size()))
          throw std::out_of_range("level rule has no value for level " + std::to_string(n));
        return values[static_cast<std::size_t>(n - 1)];
      case Kind::pow2: {
        if (n + offset < 0) throw std::domain_error("pow2 rule with negative exponent");
        BigInt r = 1;
        r <<= (n + offset);
        return r;
      }
    }
    return 0;
  }

  json to_json() const {
    json j;
    switch (kind) {
      case Kind::constant:
        j["kind"] = "constant";
        j["value"] = to_string(value);
        break;
      case Kind::list: {
        j["kind"] = "list";
        json arr = json::array();
        for (const auto& v : values) arr.push_back(to_string(v));
        j["values"] = arr;
        break;
      }
      case Kind::pow2:
        j["kind"] = "pow2";
        j["offset"] = offset;
        break;
    }
    return j;
  }

  static BigInt big_from_json(const json& v) {
    if (v.is_string()) return parse_bigint(v.get<std::string>());
    if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
    if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
    throw std::invalid_argument("expected an integer or decimal string");
  }

  static LevelRule from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(big_from_json(j.at("value")));
    if (kind == "pow2") return pow2(j.at("offset").get<int>());
    if (kind == "list") {
      std::vector<BigInt> vs;
      for (const auto& v : j.at("values")) vs.push_back(big_from_json(v));
      return list(std::move(vs));
    }
    throw std::invalid_argument("unknown level rule kind: " + kind);
  }
};

/// Thrown when a schedule's parameters violate the block-structure rules.
struct ScheduleError : ParameterError {
  using ParameterError::ParameterError;
};

class BlockSchedule {
 public:
  static constexpr int kDefaultMaxLevel = 10;
  static constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

  BlockSchedule(BigInt a1, LevelRule b, LevelRule d, int max_level = kDefaultMaxLevel)
      : a1_(std::move(a1)), b_rule_(std::move(b)), d_rule_(std::move(d)), max_level_(max_level) {
    if (a1_ < 1) throw ScheduleError("a_1 must be a positive integer");
    if (max_level_ < 1) throw ScheduleError("max_level must be at least 1");
    for (const auto& rule : {b_rule_, d_rule_})
      if (auto lv = rule.levels_defined(); lv && *lv < max_level_) max_level_ = *lv;
    if (max_level_ < 1) throw ScheduleError("level rule lists must be non-empty");

    a_.assign(static_cast<std::size_t>(max_level_ + 1), 0);
    b_ = d_ = period_ = a_;
    a_[1] = a1_;
    for (int n = 1; n <= max_level_; ++n) {
      b_[idx(n)] = b_rule_.at(n);
      d_[idx(n)] = d_rule_.at(n);
      if (b_[idx(n)] < 1) throw ScheduleError("b_" + std::to_string(n) + " must be positive");
      if (d_[idx(n)] < 2)
        throw ScheduleError("d_" + std::to_string(n) + " must be at least 2 for blocks to be separated");
      if (n > 1 && d_[idx(n)] % d_[idx(n - 1)] != 0)
        throw ScheduleError("d_" + std::to_string(n) + " = " + to_string(d_[idx(n)]) +
                            " is not a multiple of d_" + std::to_string(n - 1) + " = " +
                            to_string(d_[idx(n - 1)]));
      if (n > 1) a_[idx(n)] = (b_[idx(n - 1)] * d_[idx(n - 1)] + 1) * a_[idx(n - 1)];
      period_[idx(n)] = a_[idx(n)] * d_[idx(n)];
    }
    a64_.assign(a_.size(), 0);
    period64_ = a64_;
    for (int n = 1; n <= max_level_; ++n) {
      a64_[idx(n)] = saturate(a_[idx(n)]);
      period64_[idx(n)] = saturate(period_[idx(n)]);
    }
    delta_.assign(a_.size(), Rational(0));
    for (int n = 1; n <= max_level_; ++n)
      delta_[idx(n)] = delta_[idx(n - 1)] + Rational(BigInt(1), d_[idx(n)]);
  }

  int max_level() const { return max_level_; }
  const LevelRule& b_rule() const { return b_rule_; }
  const LevelRule& d_rule() const { return d_rule_; }

  const BigInt& a(int n) const { return a_.at(checked(n)); }
  const BigInt& b(int n) const { return b_.at(checked(n)); }
  const BigInt& d(int n) const { return d_.at(checked(n)); }
  /// a_n d_n, the repetition period of level-n blocks.
  const BigInt& period(int n) const { return period_.at(checked(n)); }

  /// Saturating 64-bit views; kSaturated stands for "larger than any index".
  std::uint64_t a64(int n) const { return a64_.at(checked(n)); }
  std::uint64_t period64(int n) const { return period64_.at(checked(n)); }
  bool fits64(int n) const { return a64(n) != kSaturated && period64(n) != kSaturated; }

  /// delta_n = sum_{j<=n} 1/d_j; delta(0) = 0.
  const Rational& delta(int n) const {
    if (n < 0 || n > max_level_) throw std::out_of_range("level out of range");
    return delta_[idx(n)];
  }

  /// sup_n delta_n, when it can be stated exactly.
  std::optional<Rational> delta_infinity() const {
    switch (d_rule_.kind) {
      case LevelRule::Kind::pow2: {
        BigInt den = 1;
        if (d_rule_.offset >= 0) {
          den <<= d_rule_.offset;
          return Rational(BigInt(1), den);
        }
        BigInt num = 1;
        num <<= -d_rule_.offset;
        return Rational(num);
      }
      case LevelRule::Kind::list: return delta_[idx(max_level_)];
      case LevelRule::Kind::constant: return std::nullopt;  // diverges
    }
    return std::nullopt;
  }

  // BigInt by reference, built-in integers by value (the 64-bit tables may
  // hold a different integer type than Int).
  template <class Int>
  using size_ref = std::conditional_t<std::is_same_v<Int, BigInt>, const BigInt&, std::uint64_t>;

  template <class Int>
  size_ref<Int> a_as(int n) const {
    if constexpr (std::is_same_v<Int, BigInt>) return a(n);
    else return a64_.at(checked(n));
  }
  template <class Int>
  size_ref<Int> period_as(int n) const {
    if constexpr (std::is_same_v<Int, BigInt>) return period(n);
    else return period64_.at(checked(n));
  }

  /// j in A_n.
  template <class Int>
  bool in_level(const Int& j, int n) const {
    return Int((j - 1) % period_as<Int>(n)) < a_as<Int>(n);
  }

  /// j in B_n; B_0 is empty.
  template <class Int>
  bool in_B(const Int& j, int n) const {
    for (int i = 1; i <= n; ++i)
      if (in_level(j, i)) return true;
    return false;
  }

  template <class Int>
  std::optional<BasicInterval<Int>> enclosing_block(const Int& j, int n) const {
    const Int r = (j - 1) % period_as<Int>(n);
    if (r >= a_as<Int>(n)) return std::nullopt;
    BasicInterval<Int> blk;
    blk.lo = j - r;
    blk.hi = blk.lo + a_as<Int>(n) - 1;
    return blk;
  }

  /// Smallest level m with j in A_m, i.e. the level at which position j is
  /// filled; its Toeplitz period is period(m).
  template <class Int>
  int fill_level(const Int& j) const {
    for (int m = 1; m <= max_level_; ++m)
      if (in_level(j, m)) return m;
    throw std::out_of_range("index beyond the cached levels of the schedule");
  }

  /// Smallest n with j <= a_n.
  template <class Int>
  int first_level_covering(const Int& j) const {
    for (int n = 1; n <= max_level_; ++n)
      if (j <= a_as<Int>(n)) return n;
    throw std::out_of_range("index beyond the cached levels of the schedule");
  }

  /// Length of the longest chain of strictly nested blocks containing j.
  ///
  /// Recursive descent: inside the current frame [1, a_cur] pick the
  /// largest-level block containing j whose endpoints are strictly interior,
  /// translate j into that block's copy of [1, a_k] and repeat.
  template <class Int>
  int depth(Int j) const {
    if (j < 1) throw std::domain_error("depth is defined for j >= 1");
    int cur = first_level_covering(j) + 1;
    if (cur > max_level_) throw std::out_of_range("depth needs one level above the covering level");
    int d = 1;
    for (;;) {
      int best = 0;
      Int lo{};
      for (int k = cur - 1; k >= 1; --k) {
        auto blk = enclosing_block(j, k);
        if (blk && blk->lo > 1 && blk->hi < a_as<Int>(cur)) {
          best = k;
          lo = blk->lo;
          break;
        }
      }
      if (best == 0) return d;
      j -= lo - 1;
      cur = best;
      ++d;
    }
  }

  /// Decomposes [a_{n-1}+1, min(a_n, to)] (all of [1, min(a_1, to)] for n = 1)
  /// into maximal blocks of levels < n and free runs of [1, a_n] \ B_{n-1}.
  ///
  ///   on_block(lo, k)                 block [lo, lo + a_k - 1] of level k
  ///   on_free(lo, hi, next_lo, next_k) free run [lo, hi]; next_lo is the
  ///                                    start of the following maximal block
  ///                                    (level next_k, 0 if none)
  ///
  /// Runs and blocks are reported whole even if they extend past `to`.
  template <class OnBlock, class OnFree>
  void walk_level(int n, std::uint64_t to, OnBlock&& on_block, OnFree&& on_free) const {
    if (!fits64(n) || (n > 1 && !fits64(n - 1)))
      throw std::out_of_range("walk_level requires 64-bit level sizes");
    const std::uint64_t end = std::min(to, a64(n));
    if (n == 1) {
      if (end >= 1) on_free(std::uint64_t{1}, a64(1), a64(1) + 1, 0);
      return;
    }
    const std::uint64_t p1 = period64(1);
    const std::uint64_t a1 = a64(1);
    std::uint64_t j = a64(n - 1) + 1;
    while (j <= end) {
      const std::uint64_t r = (j - 1) % p1;
      if (r < a1) {
        int k = n - 1;
        while (k > 1 && !in_level(j, k)) --k;
        on_block(j, k);
        j += a64(k);
      } else {
        const std::uint64_t next = j - r + p1;
        int k = n - 1;
        while (k > 1 && !in_level(next, k)) --k;
        on_free(j, next - 1, next, next <= a64(n) ? k : 0);
        j = next;
      }
    }
  }

  json to_json() const {
    json j;
    j["a1"] = to_string(a1_);
    j["b"] = b_rule_.to_json();
    j["d"] = d_rule_.to_json();
    j["max_level"] = max_level_;
    return j;
  }

  static BlockSchedule from_json(const json& j) {
    return BlockSchedule(LevelRule::big_from_json(j.at("a1")), LevelRule::from_json(j.at("b")),
                         LevelRule::from_json(j.at("d")), j.value("max_level", kDefaultMaxLevel));
  }

 private:
  static std::size_t idx(int n) { return static_cast<std::size_t>(n); }
  std::size_t checked(int n) const {
    if (n < 1 || n > max_level_)
      throw std::out_of_range("level " + std::to_string(n) + " outside [1, " +
                              std::to_string(max_level_) + "]");
    return idx(n);
  }
  static std::uint64_t saturate(const BigInt& x) {
    auto v = try_u64(x);
    return v ? *v : kSaturated;
  }

  BigInt a1_;
  LevelRule b_rule_;
  LevelRule d_rule_;
  int max_level_;
  std::vector<BigInt> a_, b_, d_, period_;
  std::vector<std::uint64_t> a64_, period64_;
  std::vector<Rational> delta_;
};

namespace detail {

inline std::uint64_t ceil_div(std::uint64_t x, std::uint64_t y) { return x / y + (x % y != 0); }

// Rational as a pair of 64-bit integers for hot comparisons.
inline std::pair<std::uint64_t, std::uint64_t> small_fraction(const Rational& r) {
  return {to_u64(boost::multiprecision::numerator(r)), to_u64(boost::multiprecision::denominator(r))};
}

}  // namespace detail

struct FactsOptions {
  std::uint64_t horizon = 100000;
  std::uint64_t M = 2;
  /// Prefixes up to this length are scanned exhaustively for the density fact.
  std::uint64_t exhaustive_limit = 10000;
  std::uint64_t budget = 10000000;
};

/// Checks the structural facts of the block construction on [1, horizon]:
///   F1  every block of level k' starts and ends with a block of each level k < k';
///   F2  disjoint blocks of levels k <= k' are separated by >= (d_k - 1) a_k;
///   F4  intervals J with |J| >= a_n d_n / M satisfy |J n B_n| <= M delta_n |J|.
/// Returns one report per fact.
inline std::vector<Report> verify_facts(const BlockSchedule& s, const FactsOptions& opt = {}) {
  const std::uint64_t N = opt.horizon;
  if (N > opt.budget)
    throw BudgetExceeded("horizon " + std::to_string(N) + " exceeds budget " +
                         std::to_string(opt.budget));
  if (opt.M == 0) throw std::invalid_argument("M must be positive");

  struct Blk {
    std::uint64_t lo, hi;
    int level;
  };
  std::vector<Blk> blocks;
  int top = 0;
  for (int k = 1; k <= s.max_level() && s.a64(k) <= N; ++k) {
    top = k;
    const std::uint64_t a = s.a64(k), p = s.period64(k);
    for (std::uint64_t lo = 1; lo + a - 1 <= N; lo += p) {
      blocks.push_back({lo, lo + a - 1, k});
      if (p > N) break;
    }
  }

  Report f1("block_fact_F1", "blocks of level k' start and end with blocks of every lower level");
  Report f2("block_fact_F2", "disjoint blocks of levels k <= k' are at least (d_k-1)a_k apart");
  Report f4("block_fact_F4", "|J n B_n| <= M delta_n |J| whenever |J| >= a_n d_n / M");
  for (Report* r : {&f1, &f2, &f4}) {
    r->budget["horizon"] = N;
    r->statistics["levels_enumerated"] = top;
  }
  f4.budget["M"] = opt.M;

  std::uint64_t f1_checks = 0;
  for (const auto& blk : blocks) {
    for (int k = 1; k < blk.level; ++k) {
      ++f1_checks;
      const bool starts = (blk.lo - 1) % s.period64(k) == 0;
      const bool ends = (blk.hi - 1) % s.period64(k) == s.a64(k) - 1;
      if (!starts || !ends)
        f1.fail({{"block", {blk.lo, blk.hi}}, {"level", blk.level}, {"lower_level", k}});
    }
  }
  f1.statistics["blocks"] = blocks.size();
  f1.statistics["checks"] = f1_checks;

  std::uint64_t f2_checks = 0;
  for (int k = 1; k <= top; ++k) {
    std::vector<std::uint64_t> starts, ends;
    for (const auto& blk : blocks)
      if (blk.level >= k) {
        starts.push_back(blk.lo);
        ends.push_back(blk.hi);
      }
    std::sort(starts.begin(), starts.end());
    std::sort(ends.begin(), ends.end());
    const std::uint64_t need = (s.a64(k)) * (to_u64(s.d(k)) - 1);
    for (const auto& blk : blocks) {
      if (blk.level != k) continue;
      auto nx = std::upper_bound(starts.begin(), starts.end(), blk.hi);
      if (nx != starts.end()) {
        ++f2_checks;
        const std::uint64_t gap = *nx - blk.hi - 1;
        if (gap < need)
          f2.fail({{"block", {blk.lo, blk.hi}}, {"level", k}, {"next_start", *nx}, {"gap", gap},
                   {"required", need}});
      }
      auto pv = std::lower_bound(ends.begin(), ends.end(), blk.lo);
      if (pv != ends.begin()) {
        ++f2_checks;
        const std::uint64_t gap = blk.lo - *std::prev(pv) - 1;
        if (gap < need)
          f2.fail({{"block", {blk.lo, blk.hi}}, {"level", k}, {"previous_end", *std::prev(pv)},
                   {"gap", gap}, {"required", need}});
      }
    }
  }
  f2.statistics["checks"] = f2_checks;

  // Lowest level containing each position (0: none of the enumerated levels).
  std::vector<std::uint8_t> lowest(N + 1, 0);
  for (std::uint64_t j = 1; j <= N; ++j)
    for (int k = 1; k <= s.max_level(); ++k)
      if (s.in_level(j, k)) {
        lowest[j] = static_cast<std::uint8_t>(k);
        break;
      }

  const bool exhaustive = N <= opt.exhaustive_limit;
  f4.statistics["mode"] = exhaustive ? "exhaustive" : "sampled";
  std::uint64_t f4_checks = 0;
  std::vector<std::uint64_t> pref(N + 1, 0);
  for (int n = 1; n <= s.max_level(); ++n) {
    if (s.period64(n) == BlockSchedule::kSaturated) break;
    const std::uint64_t min_len = detail::ceil_div(s.period64(n), opt.M);
    if (min_len > N) break;
    for (std::uint64_t j = 1; j <= N; ++j)
      pref[j] = pref[j - 1] + (lowest[j] != 0 && lowest[j] <= n ? 1 : 0);
    const auto [num, den] = detail::small_fraction(s.delta(n));
    auto check = [&](std::uint64_t lo, std::uint64_t len) {
      ++f4_checks;
      const std::uint64_t cnt = pref[lo + len - 1] - pref[lo - 1];
      using u128 = unsigned __int128;
      if (u128(cnt) * den > u128(opt.M) * num * len)
        f4.fail({{"level", n}, {"interval", {lo, lo + len - 1}}, {"count_in_B", cnt},
                 {"bound", to_string(Rational(opt.M) * s.delta(n) * len)}});
    };
    if (exhaustive) {
      for (std::uint64_t lo = 1; lo + min_len - 1 <= N; ++lo)
        for (std::uint64_t len = min_len; lo + len - 1 <= N; ++len) check(lo, len);
    } else {
      const std::uint64_t lo_step = std::max<std::uint64_t>(1, N / 4096);
      const std::uint64_t mult_step = std::max<std::uint64_t>(1, (N / min_len) / 1024);
      for (std::uint64_t lo = 1; lo + min_len - 1 <= N; lo += lo_step) {
        for (std::uint64_t len = min_len; len < 2 * min_len && lo + len - 1 <= N;
             len += std::max<std::uint64_t>(1, min_len / 64))
          check(lo, len);
        for (std::uint64_t m = 2; lo + m * min_len - 1 <= N; m += mult_step) check(lo, m * min_len);
      }
    }
    f4.statistics["max_level_checked"] = n;
  }
  f4.statistics["checks"] = f4_checks;
  f4.statistics["note"] = "asymptotic density bound is checked only on finite windows";
  return {f1, f2, f4};
}

}  // namespace toeplitz

#endif  // TOEPLITZ_BLOCKS_HPP
