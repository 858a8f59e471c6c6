// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "toeplitz/toeplitz.hpp"

using namespace toeplitz;

namespace {

int failures = 0;

void criterion(int id, const char* what, const std::function<std::string()>& body) {
  std::string why;
  try {
    why = body();
  } catch (const std::exception& e) {
    why = std::string("exception: ") + e.what();
  }
  if (!why.empty()) ++failures;
  std::printf("%s %2d  %s%s%s\n", why.empty() ? "PASS" : "FAIL", id, what, why.empty() ? "" : "  -- ",
              why.c_str());
  std::fflush(stdout);
}

std::string expect(const Report& r) { return r.passed() ? "" : r.check_name + ": " + r.to_json().dump(); }

std::string expect_all(const std::vector<Report>& rs) {
  for (const auto& r : rs)
    if (auto w = expect(r); !w.empty()) return w;
  return "";
}

const SegmentSequence& segment() {
  static const SegmentSequence s = generate_segment(derive_segment_params(Rational(1, 4), Rational(1, 4)), 100'000);
  return s;
}

const SeparatorSequence& separator() {
  static const SeparatorSequence s(make_separator_params(17, 64, LevelRule::pow2(5)));
  return s;
}

const InteriorParams& interior_params() {
  static const InteriorParams P = make_interior_params(20, LevelRule::pow2(4));
  return P;
}

const InteriorSequence& interior() {
  static const InteriorSequence s = generate_interior(interior_params(), 4);
  return s;
}

}  // namespace

int main() {
  criterion(1, "block schedule facts on a toy schedule (N = 1e5, M = 2)", [] {
    FactsOptions o;
    o.horizon = 100'000;
    o.M = 2;
    return expect_all(verify_facts(BlockSchedule(4, LevelRule::constant(1), LevelRule::pow2(0), 10), o));
  });

  criterion(2, "Toeplitz property of all three constructions", [] {
    ToeplitzOptions o;
    o.samples = 1000;
    if (auto w = expect(toeplitz_check(segment().sequence, segment().params.schedule, o)); !w.empty()) return w;
    ToeplitzOptions os = o;
    os.horizon = separator().schedule().a64(2);
    if (auto w = expect(toeplitz_check(separator(), separator().schedule(), os)); !w.empty()) return w;
    return expect(toeplitz_check(interior().sequence, interior_params().schedule, o));
  });

  criterion(3, "segment: |D(l, j)| <= 2nM + 1 for pairs within a_n, n = 1, 2", [] {
    const auto& s = segment();
    return expect_all({check_pis(s.params, s.sequence, 1, 1, s.sequence.horizon()),
                       check_pis(s.params, s.sequence, 2, 1, s.sequence.horizon())});
  });

  criterion(4, "segment: window averages near [0, v] and alternating endpoint frequencies", [] {
    const auto& s = segment();
    return expect_all({check_window_geometry(s.params, s.sequence, 2), check_depth_bound(s),
                       check_endpoint_frequencies(s.params, s.sequence)});
  });

  criterion(5, "separator: interval decomposition properties, levels 1-3", [] {
    return expect_all({verify_pq(separator(), 1), verify_pq(separator(), 2), verify_pq(separator(), 3)});
  });

  criterion(6, "separator: 1e5 random intervals have averages in S", [] {
    CorridorOptions o;
    o.samples = 100'000;
    if (auto w = expect(check_corridor(separator(), o)); !w.empty()) return w;
    return expect_all(check_separator_lemmas(separator()));
  });

  criterion(7, "separator: sweep path stays in S and winds once around the centre", [] {
    const auto sp = sweep_path(separator(), 1);
    const auto r = check_sweep(separator(), sp);
    if (!r.passed()) return expect(r);
    const int w = r.statistics["winding_number"].get<int>();
    return std::abs(w) == 1 ? std::string() : "winding number " + std::to_string(w);
  });

  criterion(8, "interior: averages hit their targets exactly, targets span an open set", [] {
    return expect(check_interior(interior_params(), interior().sequence, interior().targets));
  });

  criterion(9, "oracles: depth by chain enumeration, sliding windows by recount", []() -> std::string {
    const BlockSchedule S(4, LevelRule::constant(1), LevelRule::pow2(0), 10);
    for (std::uint64_t j = 1; j <= 10'000; ++j)
      if (S.depth(j) != oracle::brute_depth(S, j))
        return "depth mismatch at j = " + std::to_string(j);
    // sliding clouds over the whole prefix, then 1e4 random windows recounted
    const auto& seq = segment().sequence;
    std::vector<RotationCloud> clouds;
    for (std::uint64_t n : {7u, 455u, 3001u}) clouds.push_back(window_cloud(seq, n, 1, seq.horizon()));
    std::mt19937_64 g(9);
    for (int k = 0; k < 10'000; ++k) {
      const auto& c = clouds[uniform_below(g, clouds.size())];
      const auto& [i, r] = c.points[uniform_below(g, c.points.size())];
      const auto b = rho_streaming(seq, i, i + c.window - 1);
      if (r.x != b.x || r.y != b.y || r.len != b.len) return "window mismatch at " + std::to_string(i);
    }
    return "";
  });

  criterion(10, "negative controls: corrupted symbol and all-zero sequence are rejected", []() -> std::string {
    const auto& s = segment();
    const auto& S = s.params.schedule;
    const std::uint64_t x = 3 + 20 * S.period64(1);
    const auto bad = corrupted(s.sequence, 20'000, x, static_cast<Symbol>((s.sequence.at(3) + 1) % 3));
    ToeplitzOptions o;
    o.samples = o.sample_range = 20'000;
    if (toeplitz_check(bad, S, o).status != Status::fail) return "corruption not detected";
    const auto zeros = constant_sequence(20'000, 0);
    if (check_pis(s.params, zeros, 2, 1, 20'000).status != Status::fail) return "all-zero passes the pair bound";
    if (check_endpoint_frequencies(s.params, zeros).status != Status::fail)
      return "all-zero passes the frequency check";
    return "";
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
