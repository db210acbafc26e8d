#pragma once

// Exact integer/rational helpers shared by the rest of the library.
// BigInt and Rational are thin aliases over GMP's C++ classes; mpq_class
// keeps values in canonical reduced form with a positive denominator.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace riffle {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Multinomial coefficient (sum counts)! / prod(counts!).
inline BigInt multinomial(const std::vector<std::size_t>& counts) {
  BigInt r = 1;
  unsigned long total = 0;
  for (auto c : counts) {
    for (std::size_t j = 1; j <= c; ++j) {
      ++total;
      r *= total;
      r /= static_cast<unsigned long>(j);
    }
  }
  return r;
}

/// Binomial C(a + n - d - 1, n) as the falling-factorial product
/// (a - d)(a - d + 1)...(a - d + n - 1) / n!. Zero whenever a <= d.
inline BigInt shuffle_binomial(std::uint64_t a, std::uint64_t n, std::int64_t d) {
  const std::int64_t lo = static_cast<std::int64_t>(a) - d;
  if (lo <= 0) return 0;
  BigInt prod = 1;
  for (std::uint64_t j = 0; j < n; ++j) prod *= static_cast<unsigned long>(lo + static_cast<std::int64_t>(j));
  BigInt nf = factorial(static_cast<unsigned long>(n));
  mpz_divexact(prod.get_mpz_t(), prod.get_mpz_t(), nf.get_mpz_t());
  return prod;
}

inline BigInt power(std::uint64_t base, std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return r;
}

/// num/den in lowest terms; gmp arithmetic assumes canonical operands.
inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// "num/den", always with an explicit denominator.
inline std::string to_fraction(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_fraction(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a fraction: " + text);
  q.canonicalize();
  return q;
}

/// Decimal rendering with the requested number of significant digits.
inline std::string to_decimal(const Rational& q, int significant = 12) {
  mpf_class f(q, 512);
  std::vector<char> buf(256);
  int len = gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant, f.get_mpf_t());
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

/// Unsigned 128-bit to BigInt.
inline BigInt to_bigint(unsigned __int128 x) {
  BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(x >> 64));
  BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(x));
  return (hi << 64) + lo;
}

}  // namespace riffle
