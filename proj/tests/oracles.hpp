// Independent reference implementations shared by the tests.
#ifndef TOEPLITZ_TESTS_ORACLES_HPP
#define TOEPLITZ_TESTS_ORACLES_HPP

#include <algorithm>
#include <vector>

#include "toeplitz/blocks.hpp"

namespace oracle {

using toeplitz::BlockSchedule;

// Blocks listed explicitly from their definition: level-m blocks are
// [1 + k a_m d_m, a_m + k a_m d_m] for k >= 0.
struct Block {
  std::uint64_t lo, hi;
};

inline std::vector<Block> blocks_containing(const BlockSchedule& s, std::uint64_t j) {
  std::vector<Block> out;
  for (int m = 1; m <= s.max_level(); ++m) {
    const std::uint64_t a = s.a64(m), p = s.period64(m);
    if (a == BlockSchedule::kSaturated) break;
    for (std::uint64_t lo = 1; lo <= j; lo += p) {
      if (j <= lo + a - 1) out.push_back({lo, lo + a - 1});
      if (p == BlockSchedule::kSaturated) break;
    }
  }
  return out;
}

// Longest chain B_1 > B_2 > ... with strictly increasing left and strictly
// decreasing right endpoints, B_1 an initial block [1, a_n].
inline int brute_depth(const BlockSchedule& s, std::uint64_t j) {
  auto bs = blocks_containing(s, j);
  std::sort(bs.begin(), bs.end(), [](const Block& x, const Block& y) { return x.hi - x.lo > y.hi - y.lo; });
  std::vector<int> best(bs.size(), 0);
  int answer = 0;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (bs[i].lo == 1) best[i] = 1;
    for (std::size_t k = 0; k < i; ++k)
      if (best[k] > 0 && bs[k].lo < bs[i].lo && bs[i].hi < bs[k].hi) best[i] = std::max(best[i], best[k] + 1);
    answer = std::max(answer, best[i]);
  }
  return answer;
}

}  // namespace oracle

#endif
