#pragma once

// Exact a-shuffle probabilities and variation distances.
//
// Under an a-shuffle a permutation pi with des(pi) descents has probability
// C(a + n - des - 1, n) / a^n. For decks with repeated values the chance of
// reaching D' from D sums that over the transition set T(D, D'), which only
// depends on the descent polynomial sum_d b_d x^d of the set.

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "riffle/deck.hpp"
#include "riffle/numeric.hpp"
#include "riffle/permutation.hpp"

namespace riffle {

// ---------------------------------------------------------------------------
// Eulerian numbers

namespace detail {

class EulerianTable {
 public:
  /// Row n (n >= 1), coefficients for d = 0..n-1.
  const std::vector<BigInt>& row(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (rows_.empty()) rows_.push_back({BigInt(1)});  // n = 1
    while (rows_.size() < n) {
      const auto& prev = rows_.back();
      const std::size_t m = prev.size() + 1;
      std::vector<BigInt> next(m);
      for (std::size_t d = 0; d < m; ++d) {
        BigInt v = 0;
        if (d < prev.size()) v += (d + 1) * prev[d];
        if (d >= 1) v += (m - d) * prev[d - 1];
        next[d] = v;
      }
      rows_.push_back(std::move(next));
    }
    return rows_[n - 1];
  }

 private:
  std::mutex mutex_;
  std::deque<std::vector<BigInt>> rows_;  // push_back keeps earlier rows in place
};

inline EulerianTable& eulerian_table() {
  static EulerianTable table;
  return table;
}

}  // namespace detail

/// Row n of the Eulerian triangle: the number of permutations of n elements
/// with d descents, for d = 0..n-1.
inline const std::vector<BigInt>& eulerian_row(std::size_t n) {
  if (n == 0) throw std::invalid_argument("eulerian row needs n >= 1");
  return detail::eulerian_table().row(n);
}

inline BigInt eulerian(std::size_t n, std::int64_t d) {
  if (n == 0) throw std::invalid_argument("eulerian number needs n >= 1");
  if (d < 0 || static_cast<std::size_t>(d) >= n) return 0;
  return eulerian_row(n)[static_cast<std::size_t>(d)];
}

// ---------------------------------------------------------------------------
// Distinct decks

/// Probability of one particular permutation with d descents after an a-shuffle of n cards.
inline Rational shuffle_prob_distinct(std::uint64_t a, std::uint64_t n, std::int64_t d) {
  if (a == 0 || n == 0) throw std::invalid_argument("a and n must be positive");
  Rational r(shuffle_binomial(a, n, d), power(a, n));
  r.canonicalize();
  return r;
}

/// Variation distance from uniform of an a-shuffled deck of n distinct cards.
inline Rational tv_distinct(std::uint64_t a, std::uint64_t n) {
  if (a == 0 || n == 0) throw std::invalid_argument("a and n must be positive");
  const auto& row = eulerian_row(n);
  const Rational uniform(1, factorial(n));
  Rational sum = 0;
  for (std::size_t d = 0; d < n; ++d) sum += row[d] * abs(shuffle_prob_distinct(a, n, static_cast<std::int64_t>(d)) - uniform);
  return sum / 2;
}

/// Upper bound on |tv - kappa/a| that depends only on n and a.
inline Rational error_bound(std::uint64_t a, std::uint64_t n) {
  if (a == 0 || n < 2) throw std::invalid_argument("error bound needs a >= 1 and n >= 2");
  const auto& row = eulerian_row(n);
  const Rational uniform(1, factorial(n));
  const BigInt first_order_den = BigInt(static_cast<unsigned long>(a)) * factorial(n - 1) * 2;
  Rational sum = 0;
  for (std::size_t d = 0; d < n; ++d) {
    // (1/(a (n-1)!)) ((n-1)/2 - d) = (n - 1 - 2d) / (2 a (n-1)!)
    Rational first_order(BigInt(static_cast<long>(n) - 1 - 2 * static_cast<long>(d)), first_order_den);
    first_order.canonicalize();
    sum += row[d] * abs(shuffle_prob_distinct(a, n, static_cast<std::int64_t>(d)) - uniform - first_order);
  }
  return sum / 2;
}

// ---------------------------------------------------------------------------
// Repeated values

/// Coefficients b_d of the descent polynomial of T(D, D').
struct DescentPolynomial {
  std::vector<BigInt> coefficients;

  BigInt total() const {
    BigInt t = 0;
    for (const auto& b : coefficients) t += b;
    return t;
  }
  bool operator==(const DescentPolynomial&) const = default;
};

inline DescentPolynomial descent_polynomial(const Deck& source, const Deck& target, const Budget& budget = {}) {
  std::vector<std::uint64_t> tally(source.size(), 0);
  for_each_transition(source, target, budget, [&](const Permutation& p) { ++tally[p.descents()]; });
  DescentPolynomial out;
  for (auto t : tally) out.coefficients.emplace_back(static_cast<unsigned long>(t));
  return out;
}

/// P_a(D -> D') from the descent polynomial of T(D, D').
inline Rational transition_prob(std::uint64_t a, const DescentPolynomial& poly) {
  if (a == 0) throw std::invalid_argument("a must be positive");
  const std::uint64_t n = poly.coefficients.size();
  BigInt num = 0;
  for (std::size_t d = 0; d < n; ++d)
    if (poly.coefficients[d] != 0) num += poly.coefficients[d] * shuffle_binomial(a, n, static_cast<std::int64_t>(d));
  Rational r(num, power(a, n));
  r.canonicalize();
  return r;
}

inline Rational transition_prob(std::uint64_t a, const Deck& source, const Deck& target, const Budget& budget = {}) {
  return transition_prob(a, descent_polynomial(source, target, budget));
}

/// Descent polynomials of T(D, D') for every D' in Orb(D), from one pass over S_n.
inline std::map<std::string, DescentPolynomial> descent_polynomials_from(const Deck& source,
                                                                          const Budget& budget = {}) {
  const std::size_t n = source.size();
  check_deck_size_budget(n, budget);
  std::unordered_map<std::string, std::vector<std::uint64_t>> tally;
  std::string target(n, ' ');
  for_each_permutation(n, [&](const std::vector<int>& p) {
    for (std::size_t i = 0; i < n; ++i) target[static_cast<std::size_t>(p[i])] = source[i];
    auto& t = tally[target];
    if (t.empty()) t.assign(n, 0);
    ++t[count_descents(p)];
  });
  std::map<std::string, DescentPolynomial> out;
  for (auto& [deck, t] : tally) {
    DescentPolynomial poly;
    for (auto c : t) poly.coefficients.emplace_back(static_cast<unsigned long>(c));
    out.emplace(deck, std::move(poly));
  }
  return out;
}

/// Descent polynomials of T(D, D') for every source D in Orb(D'), from one pass over S_n.
inline std::map<std::string, DescentPolynomial> descent_polynomials_to(const Deck& target,
                                                                        const Budget& budget = {}) {
  const std::size_t n = target.size();
  check_deck_size_budget(n, budget);
  std::unordered_map<std::string, std::vector<std::uint64_t>> tally;
  std::string source(n, ' ');
  for_each_permutation(n, [&](const std::vector<int>& p) {
    for (std::size_t i = 0; i < n; ++i) source[i] = target[static_cast<std::size_t>(p[i])];
    auto& t = tally[source];
    if (t.empty()) t.assign(n, 0);
    ++t[count_descents(p)];
  });
  std::map<std::string, DescentPolynomial> out;
  for (auto& [deck, t] : tally) {
    DescentPolynomial poly;
    for (auto c : t) poly.coefficients.emplace_back(static_cast<unsigned long>(c));
    out.emplace(deck, std::move(poly));
  }
  return out;
}

/// P_a(D -> D') for every D' in the orbit, keyed by the target's cards.
inline std::map<std::string, Rational> transition_distribution_from(std::uint64_t a, const Deck& source,
                                                                     const Budget& budget = {}) {
  std::map<std::string, Rational> out;
  for (const auto& [deck, poly] : descent_polynomials_from(source, budget)) out.emplace(deck, transition_prob(a, poly));
  return out;
}

/// P_a(D -> D') for every source D in the orbit of the dealing pattern D'.
inline std::map<std::string, Rational> transition_distribution_to(std::uint64_t a, const Deck& target,
                                                                   const Budget& budget = {}) {
  std::map<std::string, Rational> out;
  for (const auto& [deck, poly] : descent_polynomials_to(target, budget)) out.emplace(deck, transition_prob(a, poly));
  return out;
}

inline Rational tv_from_uniform(const std::map<std::string, Rational>& dist, const BigInt& orbit_size) {
  const Rational uniform(1, orbit_size);
  Rational sum = 0;
  for (const auto& [deck, p] : dist) sum += abs(p - uniform);
  // Unreached decks have probability zero.
  const BigInt missing = orbit_size - static_cast<unsigned long>(dist.size());
  sum += missing * uniform;
  return sum / 2;
}

/// Variation distance after a-shuffling the fixed source deck D.
inline Rational tv_fixed_source(std::uint64_t a, const Deck& source, const Budget& budget = {}) {
  return tv_from_uniform(transition_distribution_from(a, source, budget), source.composition().orbit_size());
}

/// Variation distance of the partition produced by a-shuffling and dealing with pattern D'.
inline Rational tv_fixed_target(std::uint64_t a, const Deck& target, const Budget& budget = {}) {
  return tv_from_uniform(transition_distribution_to(a, target, budget), target.composition().orbit_size());
}

}  // namespace riffle
