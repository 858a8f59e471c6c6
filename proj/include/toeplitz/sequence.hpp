#ifndef TOEPLITZ_SEQUENCE_HPP
#define TOEPLITZ_SEQUENCE_HPP

#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toeplitz/arith.hpp"

namespace toeplitz {

/// A one-sided sequence over {0,1,2} that can be queried pointwise and for
/// symbol counts on index intervals, up to some evaluable horizon.
template <class S>
concept symbol_sequence = requires(const S& s, std::uint64_t j) {
  { s.at(j) } -> std::convertible_to<Symbol>;
  { s.horizon() } -> std::convertible_to<std::uint64_t>;
  { s.counts(j, j) } -> std::same_as<Counts>;
};

/// Symbols stored explicitly, with prefix-count checkpoints every 256
/// positions so that interval counts cost at most one short scan.
class MaterializedSequence {
 public:
  static constexpr std::uint64_t kCheckpoint = 256;

  MaterializedSequence() = default;
  explicit MaterializedSequence(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    for (Symbol s : symbols_)
      if (s >= kAlphabetSize) throw std::invalid_argument("symbol outside {0,1,2}");
    rebuild();
  }

  std::uint64_t horizon() const { return symbols_.size(); }

  Symbol at(std::uint64_t j) const {
    if (j < 1 || j > symbols_.size())
      throw std::out_of_range("index " + std::to_string(j) + " outside the materialized horizon");
    return symbols_[j - 1];
  }

  /// Counts on [1, j]; j = 0 gives zero counts.
  Counts prefix(std::uint64_t j) const {
    if (j > symbols_.size()) throw std::out_of_range("prefix beyond the materialized horizon");
    const std::uint64_t cp = j / kCheckpoint;
    Counts c = checkpoints_[cp];
    for (std::uint64_t i = cp * kCheckpoint; i < j; ++i) ++c[symbols_[i]];
    return c;
  }

  /// Counts on [lo, hi] (empty when lo = hi + 1).
  Counts counts(std::uint64_t lo, std::uint64_t hi) const {
    if (lo < 1 || lo > hi + 1) throw std::out_of_range("bad interval");
    return prefix(hi) - prefix(lo - 1);
  }

  std::span<const Symbol> symbols() const { return symbols_; }

 private:
  void rebuild() {
    checkpoints_.assign(symbols_.size() / kCheckpoint + 1, Counts{});
    Counts c;
    for (std::uint64_t i = 0; i < symbols_.size(); ++i) {
      if (i % kCheckpoint == 0) checkpoints_[i / kCheckpoint] = c;
      ++c[symbols_[i]];
    }
    if (symbols_.size() % kCheckpoint == 0) checkpoints_[symbols_.size() / kCheckpoint] = c;
  }

  std::vector<Symbol> symbols_;
  std::vector<Counts> checkpoints_;
};

static_assert(symbol_sequence<MaterializedSequence>);

/// Copy of `seq` restricted to [1, horizon] with position j replaced by s.
template <symbol_sequence Seq>
MaterializedSequence corrupted(const Seq& seq, std::uint64_t horizon, std::uint64_t j, Symbol s) {
  std::vector<Symbol> out(horizon);
  for (std::uint64_t i = 1; i <= horizon; ++i) out[i - 1] = seq.at(i);
  out.at(j - 1) = s;
  return MaterializedSequence(std::move(out));
}

inline MaterializedSequence constant_sequence(std::uint64_t horizon, Symbol s) {
  return MaterializedSequence(std::vector<Symbol>(horizon, s));
}

}  // namespace toeplitz

#endif  // TOEPLITZ_SEQUENCE_HPP
