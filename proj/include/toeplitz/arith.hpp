#ifndef TOEPLITZ_ARITH_HPP
#define TOEPLITZ_ARITH_HPP

// Exact arithmetic vocabulary shared by every module: arbitrary precision
// integers and rationals, the three-letter alphabet, and symbol counts.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace toeplitz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using Symbol = std::uint8_t;
inline constexpr int kAlphabetSize = 3;

/// Construction parameters that violate a condition of the construction.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::string to_string(const BigInt& x) { return x.str(); }

inline BigInt parse_bigint(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bad integer literal");
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9')
      throw std::invalid_argument("bad integer literal: " + std::string(s));
  return BigInt(std::string(s));
}

/// "num/den" with the denominator omitted when it is 1.
inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Accepts "p/q", an integer, or a finite decimal such as "0.05".
inline Rational parse_rational(std::string_view s) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
    while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
    return t;
  };
  s = trim(s);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_bigint(trim(s.substr(0, slash)));
    BigInt den = parse_bigint(trim(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string digits(s.substr(0, dot));
    std::string frac(s.substr(dot + 1));
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    BigInt den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    BigInt whole = parse_bigint(digits + frac);
    return Rational(whole, den);
  }
  return Rational(parse_bigint(s));
}

/// Conversion that fails loudly instead of truncating.
inline std::uint64_t to_u64(const BigInt& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
  return static_cast<std::uint64_t>(x);
}

inline std::optional<std::uint64_t> try_u64(const BigInt& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(x);
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// Number of occurrences of each symbol over some index set.
template <class Int>
struct BasicCounts {
  std::array<Int, kAlphabetSize> c{};

  Int& operator[](int s) { return c[static_cast<std::size_t>(s)]; }
  const Int& operator[](int s) const { return c[static_cast<std::size_t>(s)]; }
  Int total() const { return c[0] + c[1] + c[2]; }

  BasicCounts& operator+=(const BasicCounts& o) {
    for (int s = 0; s < kAlphabetSize; ++s) (*this)[s] += o[s];
    return *this;
  }
  BasicCounts& operator-=(const BasicCounts& o) {
    for (int s = 0; s < kAlphabetSize; ++s) (*this)[s] -= o[s];
    return *this;
  }
  friend BasicCounts operator+(BasicCounts a, const BasicCounts& b) { return a += b; }
  friend BasicCounts operator-(BasicCounts a, const BasicCounts& b) { return a -= b; }
  friend BasicCounts operator*(const Int& k, BasicCounts a) {
    for (int s = 0; s < kAlphabetSize; ++s) a[s] *= k;
    return a;
  }
  friend bool operator==(const BasicCounts&, const BasicCounts&) = default;

  static BasicCounts unit(int s, const Int& n) {
    BasicCounts r;
    r[s] = n;
    return r;
  }
};

using Counts = BasicCounts<std::uint64_t>;
using BigCounts = BasicCounts<BigInt>;

inline Counts to_u64(const BigCounts& b) {
  Counts r;
  for (int s = 0; s < kAlphabetSize; ++s) r[s] = to_u64(b[s]);
  return r;
}

}  // namespace toeplitz

#endif  // TOEPLITZ_ARITH_HPP
