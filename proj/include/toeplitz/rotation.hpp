#ifndef TOEPLITZ_ROTATION_HPP
#define TOEPLITZ_ROTATION_HPP

// Symbolic rotation vectors rho(J) = psi(J) / |J| and the analyses built on
// them: window clouds, the separator sweep path and its winding number,
// membership in the corridor S around the triangle boundary T, convex hulls,
// and the Toeplitz / almost-periodicity checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toeplitz/arith.hpp"
#include "toeplitz/blocks.hpp"
#include "toeplitz/report.hpp"
#include "toeplitz/separator.hpp"
#include "toeplitz/sequence.hpp"

namespace toeplitz {

using i128 = __int128;
using u128 = unsigned __int128;

struct Displacement {
  static constexpr std::array<std::array<int, 2>, 3> v{{{0, 0}, {1, 0}, {0, 1}}};
  static constexpr const std::array<int, 2>& of(Symbol s) { return v[s]; }
};

/// Sum of the displacement vectors of a word over '0', '1', '2'.
inline std::pair<std::int64_t, std::int64_t> psi(std::string_view word) {
  std::int64_t x = 0, y = 0;
  for (char ch : word) {
    if (ch < '0' || ch > '2') throw std::invalid_argument("word must be over {0,1,2}");
    x += Displacement::of(static_cast<Symbol>(ch - '0'))[0];
    y += Displacement::of(static_cast<Symbol>(ch - '0'))[1];
  }
  return {x, y};
}

struct Point2 {
  Rational x, y;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// rho(J) kept as the integer triple (psi_x, psi_y, |J|); comparisons are exact.
struct RotationVector {
  std::uint64_t x = 0, y = 0, len = 1;

  static RotationVector from_counts(const Counts& c) { return {c[1], c[2], c.total()}; }

  Rational rx() const { return Rational(BigInt(x), BigInt(len)); }
  Rational ry() const { return Rational(BigInt(y), BigInt(len)); }
  Point2 point() const { return {rx(), ry()}; }
  double dx() const { return static_cast<double>(x) / static_cast<double>(len); }
  double dy() const { return static_cast<double>(y) / static_cast<double>(len); }

  friend bool operator==(const RotationVector& a, const RotationVector& b) {
    return u128(a.x) * b.len == u128(b.x) * a.len && u128(a.y) * b.len == u128(b.y) * a.len;
  }

  /// 0 <= x, 0 <= y, x + y <= 1.
  bool in_simplex() const { return len > 0 && u128(x) + y <= len; }

  json to_json() const { return {to_string(rx()), to_string(ry())}; }
};

/// rho(J) from interval counts.
template <symbol_sequence Seq>
RotationVector rho(const Seq& seq, std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || hi < lo) throw std::out_of_range("rho needs a non-empty interval");
  if (hi > seq.horizon()) throw std::out_of_range("interval beyond the evaluable horizon");
  return RotationVector::from_counts(seq.counts(lo, hi));
}

/// rho(J) by evaluating every symbol of J.
template <symbol_sequence Seq>
RotationVector rho_streaming(const Seq& seq, std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || hi < lo) throw std::out_of_range("rho needs a non-empty interval");
  if (hi > seq.horizon()) throw std::out_of_range("interval beyond the evaluable horizon");
  Counts c;
  for (std::uint64_t j = lo; j <= hi; ++j) ++c[seq.at(j)];
  return RotationVector::from_counts(c);
}

// ---------------------------------------------------------------------------
// Region S = closed 1/8-neighbourhood (L2) of the triangle boundary T.

namespace detail {

// Squared distance from p to the segment [a, b].
inline Rational dist2_segment(const Point2& p, const Point2& a, const Point2& b) {
  const Rational ux = b.x - a.x, uy = b.y - a.y;
  const Rational wx = p.x - a.x, wy = p.y - a.y;
  Rational t = (wx * ux + wy * uy) / (ux * ux + uy * uy);
  if (t < 0) t = 0;
  if (t > 1) t = 1;
  const Rational dx = wx - t * ux, dy = wy - t * uy;
  return dx * dx + dy * dy;
}

}  // namespace detail

/// Exact squared L2 distance to T.
inline Rational dist2_to_T(const Point2& p) {
  const Point2 v0{0, 0}, v1{1, 0}, v2{0, 1};
  return std::min({detail::dist2_segment(p, v0, v1), detail::dist2_segment(p, v0, v2),
                   detail::dist2_segment(p, v1, v2)});
}

inline double dist_to_T(const Point2& p) { return std::sqrt(to_double(dist2_to_T(p))); }

inline bool in_S(const Point2& p) { return dist2_to_T(p) <= Rational(1, 64); }

/// Fast path for averages, which lie in the simplex: the distance to T is
/// then min(x, y, (1 - x - y)/sqrt 2).
inline bool in_S(const RotationVector& r) {
  if (!r.in_simplex()) return in_S(r.point());
  const u128 L = r.len;
  if (8 * u128(r.x) <= L || 8 * u128(r.y) <= L) return true;
  const u128 slack = L - r.x - r.y;
  if (L < (u128(1) << 60)) return 64 * slack * slack <= 2 * L * L;
  return in_S(r.point());
}

/// Exact test rho in the closed L2 ball of radius 1/k around v_s.
inline bool in_ball(const BigCounts& c, int s, unsigned k) {
  const BigInt len = c.total();
  if (len == 0) throw std::invalid_argument("empty interval");
  const auto& v = Displacement::of(static_cast<Symbol>(s));
  const BigInt dx = c[1] - v[0] * len, dy = c[2] - v[1] * len;
  return BigInt(k) * k * (dx * dx + dy * dy) <= len * len;
}
inline bool in_ball(const Counts& c, int s, unsigned k) {
  BigCounts b;
  for (int i = 0; i < kAlphabetSize; ++i) b[i] = c[i];
  return in_ball(b, s, k);
}

// ---------------------------------------------------------------------------
// Window clouds.

struct RotationCloud {
  std::uint64_t window = 0;
  std::uint64_t stride = 1;
  std::vector<std::pair<std::uint64_t, RotationVector>> points;  // (window start, rho)
  /// Stopped early because the evaluation budget ran out.
  bool truncated = false;
};

/// rho([i, i + n - 1]) for i = lo, lo + stride, ... while the window stays
/// inside [lo, hi]. Uses sliding updates when stride < n.
template <symbol_sequence Seq>
RotationCloud window_cloud(const Seq& seq, std::uint64_t n, std::uint64_t lo, std::uint64_t hi,
                           std::uint64_t stride = 1, std::uint64_t budget = 10'000'000) {
  if (n < 1 || stride < 1) throw std::invalid_argument("window length and stride must be positive");
  if (lo < 1 || hi > seq.horizon()) throw std::out_of_range("range beyond the evaluable horizon");
  RotationCloud cloud{.window = n, .stride = stride, .points = {}, .truncated = false};
  if (hi < lo || hi - lo + 1 < n) return cloud;
  const std::uint64_t last = hi - n + 1;
  Counts c = seq.counts(lo, lo + n - 1);
  for (std::uint64_t i = lo;;) {
    if (cloud.points.size() >= budget) {
      cloud.truncated = true;
      break;
    }
    cloud.points.emplace_back(i, RotationVector::from_counts(c));
    if (last - i < stride) break;
    const std::uint64_t next = i + stride;
    if (stride < n) {
      for (std::uint64_t j = i; j < next; ++j) {
        --c[seq.at(j)];
        ++c[seq.at(j + n)];
      }
    } else {
      c = seq.counts(next, next + n - 1);
    }
    i = next;
  }
  return cloud;
}

// ---------------------------------------------------------------------------
// Winding numbers by quadrant counting.

namespace detail {

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline int quadrant(int sx, int sy) {
  if (sx > 0 && sy >= 0) return 0;
  if (sx <= 0 && sy > 0) return 1;
  if (sx < 0 && sy <= 0) return 2;
  return 3;
}

// Offsets of the polyline vertices from the centre.
template <class T>
int winding_of_offsets(std::vector<std::pair<T, T>> d) {
  if (d.empty()) throw std::invalid_argument("empty polyline");
  if (d.front() != d.back()) d.push_back(d.front());
  int total = 0;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const auto& [x0, y0] = d[i];
    const auto& [x1, y1] = d[i + 1];
    if (sign_of(x0) == 0 && sign_of(y0) == 0) throw std::invalid_argument("vertex coincides with centre");
    const int q0 = quadrant(sign_of(x0), sign_of(y0));
    const int q1 = quadrant(sign_of(x1), sign_of(y1));
    switch ((q1 - q0 + 4) % 4) {
      case 0: break;
      case 1: total += 1; break;
      case 3: total -= 1; break;
      case 2: {
        const int cr = sign_of(T(x0 * y1 - y0 * x1));
        if (cr == 0) throw std::invalid_argument("polyline passes through the centre");
        total += 2 * cr;
        break;
      }
    }
  }
  return total / 4;
}

}  // namespace detail

inline int winding_number(const std::vector<Point2>& poly, const Point2& centre) {
  std::vector<std::pair<Rational, Rational>> d;
  d.reserve(poly.size());
  for (const auto& p : poly) d.emplace_back(p.x - centre.x, p.y - centre.y);
  return detail::winding_of_offsets(std::move(d));
}

/// Same, for rotation vectors; uses 128-bit arithmetic when it cannot overflow.
inline int winding_number(const std::vector<RotationVector>& poly, const Point2& centre) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const BigInt cd = lcm(denominator(centre.x), denominator(centre.y));
  const BigInt cx = numerator(centre.x) * (cd / denominator(centre.x));
  const BigInt cy = numerator(centre.y) * (cd / denominator(centre.y));
  std::uint64_t max_len = 0;
  for (const auto& r : poly) max_len = std::max(max_len, r.len);
  const bool small = cd < (1 << 10) && abs(cx) < (1 << 10) && abs(cy) < (1 << 10) && max_len < (1ull << 50);
  if (!small) {
    std::vector<Point2> pts;
    pts.reserve(poly.size());
    for (const auto& r : poly) pts.push_back(r.point());
    return winding_number(pts, centre);
  }
  const auto d = static_cast<std::int64_t>(cd), ux = static_cast<std::int64_t>(cx),
             uy = static_cast<std::int64_t>(cy);
  std::vector<std::pair<i128, i128>> off;
  off.reserve(poly.size());
  for (const auto& r : poly)
    off.emplace_back(i128(r.x) * d - i128(ux) * r.len, i128(r.y) * d - i128(uy) * r.len);
  return detail::winding_of_offsets(std::move(off));
}

// ---------------------------------------------------------------------------
// Convex hull (Andrew's monotone chain) with exact area.

struct Hull {
  std::vector<Point2> vertices;  // counter-clockwise, no repeated point
  Rational area = 0;
};

namespace detail {

template <class T>
std::vector<std::pair<T, T>> monotone_chain(std::vector<std::pair<T, T>> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return T((a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first));
  };
  std::vector<std::pair<T, T>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

template <class T>
T twice_area(const std::vector<std::pair<T, T>>& h) {
  T s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    s += a.first * b.second - a.second * b.first;
  }
  return s < 0 ? T(-s) : s;
}

}  // namespace detail

inline Hull hull(const std::vector<Point2>& pts) {
  if (pts.empty()) throw std::invalid_argument("hull of an empty cloud");
  std::vector<std::pair<Rational, Rational>> p;
  p.reserve(pts.size());
  for (const auto& q : pts) p.emplace_back(q.x, q.y);
  const auto h = detail::monotone_chain(std::move(p));
  Hull out;
  for (const auto& [x, y] : h) out.vertices.push_back({x, y});
  if (h.size() >= 3) out.area = detail::twice_area(h) / 2;
  return out;
}

/// Hull of rotation vectors; integer arithmetic when all share one length.
inline Hull hull(const std::vector<RotationVector>& pts) {
  if (pts.empty()) throw std::invalid_argument("hull of an empty cloud");
  const std::uint64_t L = pts.front().len;
  const bool common = L < (1ull << 40) &&
                      std::all_of(pts.begin(), pts.end(), [&](const RotationVector& r) { return r.len == L; });
  if (!common) {
    std::vector<Point2> q;
    q.reserve(pts.size());
    for (const auto& r : pts) q.push_back(r.point());
    return hull(q);
  }
  std::vector<std::pair<i128, i128>> p;
  p.reserve(pts.size());
  for (const auto& r : pts) p.emplace_back(r.x, r.y);
  const auto h = detail::monotone_chain(std::move(p));
  Hull out;
  for (const auto& [x, y] : h)
    out.vertices.push_back({Rational(BigInt(static_cast<std::int64_t>(x)), BigInt(L)),
                            Rational(BigInt(static_cast<std::int64_t>(y)), BigInt(L))});
  if (h.size() >= 3)
    out.area = Rational(BigInt(static_cast<std::int64_t>(detail::twice_area(h))), BigInt(2) * L * L);
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic sampling helpers; independent of the standard library's
// distribution implementations so reports are reproducible everywhere.

inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty sampling range");
  return g() % n;
}

inline double unit_real(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline BigInt uniform_below(std::mt19937_64& g, const BigInt& n) {
  if (n <= 0) throw std::invalid_argument("empty sampling range");
  BigInt r = 0;
  for (BigInt span = 1; span < n * 1024; span <<= 64) r = (r << 64) + g();
  return r % n;
}

// ---------------------------------------------------------------------------
// Toeplitz and almost-periodicity checks.

struct ToeplitzOptions {
  std::uint64_t horizon = 0;  // 0: the sequence's horizon
  std::uint64_t samples = 1000;
  /// Positions are drawn from [1, sample_range]; every position is checked
  /// when samples >= sample_range.
  std::uint64_t sample_range = 10'000;
  std::uint64_t seed = 1;
  std::uint64_t budget = 100'000'000;  // symbol comparisons
};

/// For sampled j: with m the level that filled j, omega(j + k a_m d_m) = omega(j)
/// for every k with j + k a_m d_m <= horizon.
template <symbol_sequence Seq>
Report toeplitz_check(const Seq& seq, const BlockSchedule& S, const ToeplitzOptions& opt = {}) {
  Report rep("toeplitz", "omega(j + k a_m d_m) = omega(j), m the level filling j");
  const std::uint64_t H = opt.horizon ? std::min(opt.horizon, seq.horizon()) : seq.horizon();
  const std::uint64_t range = std::min(opt.sample_range, H);
  rep.seed = opt.seed;
  rep.budget = {{"max_comparisons", opt.budget}};
  std::vector<std::uint64_t> js;
  if (opt.samples >= range) {
    for (std::uint64_t j = 1; j <= range; ++j) js.push_back(j);
  } else {
    std::mt19937_64 g(opt.seed);
    for (std::uint64_t i = 0; i < opt.samples; ++i) js.push_back(1 + uniform_below(g, range));
  }
  std::uint64_t comparisons = 0, vacuous = 0;
  std::map<int, std::uint64_t> by_level;
  for (std::uint64_t j : js) {
    const int m = S.fill_level(j);
    ++by_level[m];
    const std::uint64_t p = S.period64(m);
    if (p == BlockSchedule::kSaturated || j + p > H) {
      ++vacuous;
      continue;
    }
    const Symbol want = seq.at(j);
    for (std::uint64_t x = j + p; x <= H; x += p) {
      if (++comparisons > opt.budget) throw BudgetExceeded("toeplitz_check exceeded its comparison budget");
      const Symbol got = seq.at(x);
      if (got != want) {
        rep.fail({{"j", j}, {"level", m}, {"period", p}, {"index", x}, {"expected", want}, {"found", got}});
        break;
      }
      if (x > H - p) break;
    }
  }
  rep.statistics["horizon"] = H;
  rep.statistics["positions"] = js.size();
  rep.statistics["exhaustive"] = opt.samples >= range;
  rep.statistics["comparisons"] = comparisons;
  rep.statistics["positions_without_repeat"] = vacuous;
  json lv = json::object();
  for (auto [k, c] : by_level) lv[std::to_string(k)] = c;
  rep.statistics["positions_by_fill_level"] = lv;
  return rep;
}

struct AlmostPeriodicityOptions {
  unsigned word_length = 4;
  std::uint64_t horizon = 0;    // 0: the sequence's horizon
  std::uint64_t gap_bound = 0;  // 0: report only
  std::uint64_t budget = 100'000'000;
};

/// Maximum gap between consecutive occurrences of every word of the given
/// length in [1, horizon].
template <symbol_sequence Seq>
Report almost_periodicity_check(const Seq& seq, const AlmostPeriodicityOptions& opt = {}) {
  Report rep("almost_periodicity", "bounded return times of every word (finite horizon)");
  const unsigned w = opt.word_length;
  if (w < 1 || w > 12) throw std::invalid_argument("word length must be in [1, 12]");
  const std::uint64_t H = opt.horizon ? std::min(opt.horizon, seq.horizon()) : seq.horizon();
  if (H > opt.budget) throw BudgetExceeded("almost_periodicity_check exceeded its scan budget");
  rep.budget = {{"max_positions", opt.budget}};
  std::uint64_t words = 1;
  for (unsigned i = 0; i < w; ++i) words *= 3;
  std::vector<std::uint64_t> last(words, 0), gap(words, 0), seen(words, 0);
  std::uint64_t code = 0;
  for (std::uint64_t j = 1; j <= H; ++j) {
    code = (code * 3 + seq.at(j)) % words;
    if (j < w) continue;
    const std::uint64_t start = j - w + 1;
    if (seen[code]) gap[code] = std::max(gap[code], start - last[code]);
    last[code] = start;
    ++seen[code];
  }
  auto word_of = [&](std::uint64_t c) {
    std::string s(w, '0');
    for (unsigned i = w; i-- > 0; c /= 3) s[i] = static_cast<char>('0' + c % 3);
    return s;
  };
  json per = json::object();
  json absent = json::array();
  json single = json::array();
  std::uint64_t G = 0, present = 0;
  for (std::uint64_t c = 0; c < words; ++c) {
    if (!seen[c]) {
      absent.push_back(word_of(c));
      continue;
    }
    ++present;
    if (seen[c] == 1) {
      single.push_back(word_of(c));
      continue;
    }
    per[word_of(c)] = gap[c];
    G = std::max(G, gap[c]);
    if (opt.gap_bound && gap[c] > opt.gap_bound) rep.fail({{"word", word_of(c)}, {"max_gap", gap[c]}});
  }
  rep.statistics["word_length"] = w;
  rep.statistics["horizon"] = H;
  rep.statistics["words_present"] = present;
  rep.statistics["max_gap"] = G;
  rep.statistics["max_gap_per_word"] = per;
  rep.statistics["absent_words"] = absent;
  rep.statistics["single_occurrence_words"] = single;
  if (opt.gap_bound) rep.statistics["gap_bound"] = opt.gap_bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Separator sweep path and corridor checks.

struct SweepPath {
  int level = 0;
  Span J1, J2;
  std::uint64_t M = 0;  // offset of J2 relative to J1
  std::uint64_t stride = 1;
  std::vector<std::pair<std::uint64_t, RotationVector>> points;  // (i, rho(J1 + i))
};

/// rho(J1 + i) for i = 0, stride, 2 stride, ..., M_n with J1 = I12c = [p_n, q_n]
/// and J2 = J1 + M_n, M_n = (L + 2) K a_n d_n, the translate lying in I22.
inline SweepPath sweep_path(const SeparatorSequence& seq, int n, std::uint64_t stride = 0) {
  const auto& P = seq.params();
  const auto& D = seq.decomposition(n);
  const auto& c = D[IntervalTag::I12c];
  const BigInt M = BigInt(P.L + 2) * P.K * P.schedule.period(n);
  const BigInt j2_hi = c.hi + M;
  if (j2_hi > seq.horizon()) throw std::out_of_range("sweep needs a 64-bit evaluable level");
  SweepPath sp;
  sp.level = n;
  sp.J1 = {to_u64(c.lo), to_u64(c.hi)};
  sp.M = to_u64(M);
  sp.J2 = {sp.J1.lo + sp.M, sp.J1.hi + sp.M};
  const std::uint64_t len = sp.J1.length();
  if (stride == 0) stride = std::max<std::uint64_t>(1, len / 1000);
  if (stride > len / 100) throw std::invalid_argument("sweep stride exceeds |J1| / 100");
  sp.stride = stride;
  sp.points.reserve(sp.M / stride + 2);
  for (std::uint64_t i = 0;; i += stride) {
    if (i > sp.M) i = sp.M;
    sp.points.emplace_back(i, RotationVector::from_counts(seq.counts(sp.J1.lo + i, sp.J1.hi + i)));
    if (i == sp.M) break;
  }
  return sp;
}

/// Closure, corridor membership, step size and winding number of a sweep.
inline Report check_sweep(const SeparatorSequence& seq, const SweepPath& sp,
                          const Point2& centre = {Rational(1, 3), Rational(1, 3)}) {
  Report rep("separator_sweep", "closed sweep of window averages inside S winding once around the hole");
  const std::uint64_t len = sp.J1.length();
  const RotationVector r1 = rho(seq, sp.J1.lo, sp.J1.hi);
  const RotationVector r2 = rho(seq, sp.J2.lo, sp.J2.hi);
  const bool closed = r1 == r2 && sp.points.front().second == r1 && sp.points.back().second == r2;
  if (!closed) rep.fail({{"property", "closure"}, {"rho_J1", r1.to_json()}, {"rho_J2", r2.to_json()}});
  std::uint64_t outside = 0, step_violations = 0;
  for (std::size_t k = 0; k < sp.points.size(); ++k) {
    const auto& [i, r] = sp.points[k];
    if (!in_S(r)) {
      ++outside;
      rep.fail({{"property", "in_S"}, {"i", i}, {"rho", r.to_json()}});
    }
    if (k > 0) {
      // |rho_i - rho_k|_1 <= 2 (i - k)/|J1|, both averages over len positions.
      const auto& [i0, r0] = sp.points[k - 1];
      const std::uint64_t l1 = (r.x > r0.x ? r.x - r0.x : r0.x - r.x) + (r.y > r0.y ? r.y - r0.y : r0.y - r.y);
      if (l1 > 2 * (i - i0)) {
        ++step_violations;
        rep.fail({{"property", "step"}, {"i", i}, {"l1_numerator", l1}, {"len", len}});
      }
    }
  }
  std::vector<RotationVector> poly;
  poly.reserve(sp.points.size());
  for (const auto& pr : sp.points) poly.push_back(pr.second);
  int w = 0;
  try {
    w = winding_number(poly, centre);
  } catch (const std::invalid_argument& e) {
    rep.fail({{"property", "winding"}, {"error", e.what()}});
  }
  if (w != 1 && w != -1) rep.fail({{"property", "winding"}, {"winding_number", w}});
  rep.statistics = {{"level", sp.level},
                    {"J1", {sp.J1.lo, sp.J1.hi}},
                    {"J2", {sp.J2.lo, sp.J2.hi}},
                    {"M", sp.M},
                    {"stride", sp.stride},
                    {"points", sp.points.size()},
                    {"rho_J1", r1.to_json()},
                    {"closed", closed},
                    {"points_outside_S", outside},
                    {"step_violations", step_violations},
                    {"winding_number", w},
                    {"centre", {to_string(centre.x), to_string(centre.y)}}};
  return rep;
}

struct CorridorOptions {
  std::uint64_t samples = 100'000;
  std::uint64_t min_len = 10;
  std::uint64_t max_len = 0;  // 0: a_{level+1} / 4
  int level = 1;              // intervals inside [1, a_{level+1}]
  std::uint64_t seed = 1;
};

/// Falsification attempt: rho(J) in S for random J in [1, a_{level+1}] with
/// log-uniform lengths.
inline Report check_corridor(const SeparatorSequence& seq, const CorridorOptions& opt = {}) {
  Report rep("separator_corridor", "rho(J) in S for every interval J");
  const std::uint64_t A = seq.schedule().a64(opt.level + 1);
  if (A > seq.horizon()) throw std::out_of_range("corridor check needs a 64-bit evaluable level");
  const std::uint64_t max_len = opt.max_len ? opt.max_len : A / 4;
  if (opt.min_len < 1 || max_len < opt.min_len || max_len > A) throw std::invalid_argument("bad length range");
  rep.seed = opt.seed;
  rep.budget = {{"samples", opt.samples}};
  std::mt19937_64 g(opt.seed);
  const double lmin = std::log(static_cast<double>(opt.min_len));
  const double lmax = std::log(static_cast<double>(max_len) + 1.0);
  std::uint64_t near[3] = {0, 0, 0};
  for (std::uint64_t k = 0; k < opt.samples; ++k) {
    auto len = static_cast<std::uint64_t>(std::exp(lmin + unit_real(g) * (lmax - lmin)));
    len = std::clamp(len, opt.min_len, max_len);
    const std::uint64_t lo = 1 + uniform_below(g, A - len + 1);
    const RotationVector r = rho(seq, lo, lo + len - 1);
    if (!in_S(r)) rep.fail({{"J", {lo, lo + len - 1}}, {"rho", r.to_json()}});
    for (int s = 0; s < 3; ++s)
      if (in_ball(Counts{{r.len - r.x - r.y, r.x, r.y}}, s, 8)) ++near[s];
  }
  rep.statistics = {{"level", opt.level},
                    {"range", {1, A}},
                    {"samples", opt.samples},
                    {"length_range", {opt.min_len, max_len}},
                    {"within_1/8_of_v0", near[0]},
                    {"within_1/8_of_v1", near[1]},
                    {"within_1/8_of_v2", near[2]}};
  return rep;
}

struct LemmaOptions {
  int max_level = 3;
  std::uint64_t samples = 1000;  // per level and check
  std::uint64_t seed = 1;
};

/// Surrogates for the averaging lemmas of the separator construction; all
/// arithmetic is exact on big-integer counts.
///   l2              rho([1, a_{n+1}]) in B_{1/8}(v_0)
///   l3              rho([1, m]), rho([m, a_{n+1}]) in B_{1/8}(v_0)     (sampled m)
///   l4              rho(I) in B_{1/16}(v_i) for each of the seven intervals
///   long_intervals  rho(J) in B_{1/16}(v_i) for J in I with |J| >= a_n d_n / 2 (sampled)
///   endpoint        rho(J) in B_{1/8}(v_i) for J in I sharing an endpoint   (sampled)
inline std::vector<Report> check_separator_lemmas(const SeparatorSequence& seq, const LemmaOptions& opt = {}) {
  const auto& S = seq.schedule();
  std::mt19937_64 g(opt.seed);
  Report l2("separator_prefix_average", "rho([1, a_{n+1}]) in B_{1/8}(v_0)");
  Report l3("separator_prefix_suffix_average", "rho([1,m]), rho([m,a_{n+1}]) in B_{1/8}(v_0)");
  Report l4("separator_interval_average", "rho(I) in B_{1/16}(v_i) for every interval I of colour i");
  Report li("separator_long_subinterval_average", "rho(J) in B_{1/16}(v_i) for J in I, |J| >= a_n d_n/2");
  Report le("separator_endpoint_subinterval_average", "rho(J) in B_{1/8}(v_i) for J in I sharing an endpoint");
  for (Report* r : {&l3, &li, &le}) {
    r->seed = opt.seed;
    r->budget = {{"samples_per_level", opt.samples}};
  }
  std::uint64_t counted[5] = {0, 0, 0, 0, 0};
  auto interval = [&](const BigInt& lo, const BigInt& hi) { return seq.counts_big(lo, hi); };

  for (int n = 0; n <= opt.max_level; ++n) {
    const BigInt& A = S.a(n + 1);
    ++counted[0];
    if (!in_ball(interval(1, A), 0, 8)) l2.fail({{"n", n}});
    for (std::uint64_t k = 0; k < opt.samples; ++k) {
      const BigInt m = 2 + uniform_below(g, A - 2);  // m in (1, a_{n+1})
      counted[1] += 2;
      if (!in_ball(interval(1, m), 0, 8)) l3.fail({{"n", n}, {"J", {"1", to_string(m)}}});
      if (!in_ball(interval(m, A), 0, 8)) l3.fail({{"n", n}, {"J", {to_string(m), to_string(A)}}});
    }
    if (n == 0) continue;
    const auto& D = seq.decomposition(n);
    const BigInt half_period = S.period(n) / 2;
    for (int t = 0; t < kIntervalCount; ++t) {
      const auto tag = static_cast<IntervalTag>(t);
      const auto& I = D[tag];
      const int colour = interval_symbol(tag);
      ++counted[2];
      if (!in_ball(interval(I.lo, I.hi), colour, 16)) l4.fail({{"n", n}, {"interval", to_string(tag)}});
      const BigInt len = I.length();
      for (std::uint64_t k = 0; k < opt.samples; ++k) {
        if (len >= half_period) {
          const BigInt jl = half_period + uniform_below(g, len - half_period + 1);
          const BigInt lo = I.lo + uniform_below(g, len - jl + 1);
          ++counted[3];
          if (!in_ball(interval(lo, lo + jl - 1), colour, 16))
            li.fail({{"n", n}, {"interval", to_string(tag)}, {"J", {to_string(lo), to_string(BigInt(lo + jl - 1))}}});
        }
        const BigInt jl = 1 + uniform_below(g, len);
        const bool left = (g() & 1) != 0;
        const BigInt lo = left ? I.lo : I.hi - jl + 1;
        ++counted[4];
        if (!in_ball(interval(lo, lo + jl - 1), colour, 8))
          le.fail({{"n", n}, {"interval", to_string(tag)}, {"J", {to_string(lo), to_string(BigInt(lo + jl - 1))}}});
      }
    }
  }
  Report* all[5] = {&l2, &l3, &l4, &li, &le};
  for (int i = 0; i < 5; ++i) {
    all[i]->statistics["max_level"] = opt.max_level;
    all[i]->statistics["intervals_checked"] = counted[i];
  }
  return {l2, l3, l4, li, le};
}

}  // namespace toeplitz

#endif  // TOEPLITZ_ROTATION_HPP
