#pragma once

// First-order behaviour of a-shuffles for large a.
//
//   P_a(D -> D') = 1/N + c1(D, D') / a + O(1/a^2)
//   c1(D, D')    = (n / 2N) sum_{u<v} W(D,u,v) Z(D',u,v) / (n_u n_v)
//
// kappa1 (fixed source) and kappabar1 (fixed target) are half the l1 norms of
// c1 over the orbit, so the variation distance behaves like kappa / a.
//
// For a fixed target the sum over D factors through the statistic
//   theta(D) = sum_i Z(D', D(i), D(i+1)) / (n_{D(i)} n_{D(i+1)}),
// whose distribution over the orbit is built one card at a time, keyed on the
// multiset of cards used so far and the last card.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "riffle/deck.hpp"
#include "riffle/exact.hpp"
#include "riffle/numeric.hpp"
#include "riffle/permutation.hpp"

namespace riffle {

struct KappaResult {
  Rational value;
  std::string context;  // deck or pattern the constant belongs to
  BigInt orbit_size;
  std::int64_t scale = 1;  // common denominator used for theta keys (fixed target only)
};

// ---------------------------------------------------------------------------
// c1 and its enumeration oracle

inline Rational c1(const Deck& source, const Deck& target) {
  require_same_composition(source, target);
  const Deck src = target.with_cards(source.cards());
  const auto w = w_matrix(src);
  const auto z = z_matrix(target);
  const auto comp = target.composition();
  const std::size_t k = comp.counts.size();
  Rational sum = 0;
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = u + 1; v < k; ++v) {
      if (w(u, v) == 0 || z(u, v) == 0) continue;
      sum += ratio(w(u, v) * z(u, v), static_cast<long>(comp.counts[u] * comp.counts[v]));
    }
  Rational out = sum * static_cast<long>(target.size()) / (2 * comp.orbit_size());
  out.canonicalize();
  return out;
}

/// Mean of asc(pi) - des(pi) over the transition set T(D, D').
inline Rational expected_asc_minus_des(const Deck& source, const Deck& target, const Budget& budget = {}) {
  std::int64_t total = 0;
  std::int64_t count = 0;
  for_each_transition(source, target, budget, [&](const Permutation& p) {
    total += static_cast<std::int64_t>(p.ascents()) - static_cast<std::int64_t>(p.descents());
    ++count;
  });
  Rational r(total, count);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Fixed source

/// kappa1 of a deck of n distinct cards, from the Eulerian numbers.
inline Rational kappa1_distinct(std::size_t n) {
  if (n == 0) throw std::invalid_argument("kappa1 needs n >= 1");
  const auto& row = eulerian_row(n);
  BigInt sum = 0;
  for (std::size_t d = 0; d < n; ++d) {
    const long weight = std::labs(static_cast<long>(n) - 1 - 2 * static_cast<long>(d));
    sum += row[d] * weight;
  }
  Rational r(sum * static_cast<unsigned long>(n), factorial(n) * 4);
  r.canonicalize();
  return r;
}

inline double kappa1_approx(std::size_t n) {
  const double x = static_cast<double>(n);
  return x * std::sqrt((x + 1.0) / (24.0 * std::numbers::pi));
}

namespace detail {

/// lcm of n_u n_v over value pairs u < v.
inline std::int64_t pair_count_lcm(const std::vector<std::size_t>& counts) {
  std::int64_t l = 1;
  for (std::size_t u = 0; u < counts.size(); ++u)
    for (std::size_t v = u + 1; v < counts.size(); ++v)
      l = std::lcm(l, static_cast<std::int64_t>(counts[u] * counts[v]));
  return l;
}

}  // namespace detail

/// kappa1 of a source deck by summing |c1| over its whole orbit.
inline KappaResult kappa1_enum(const Deck& source, const Budget& budget = {}) {
  const auto comp = source.composition();
  check_orbit_budget(comp, budget);
  const std::size_t k = comp.counts.size();
  const std::size_t n = source.size();
  const auto w = w_matrix(source);
  const std::int64_t common = detail::pair_count_lcm(comp.counts);

  // weight[u][v] = W(D,u,v) * common / (n_u n_v) for u < v, so that
  // c1(D,D') = n / (2 N common) * sum_{u<v} weight[u][v] Z(D',u,v).
  std::vector<std::int64_t> weight(k * k, 0);
  bool all_zero = true;
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = u + 1; v < k; ++v) {
      if (comp.counts[u] == 0 || comp.counts[v] == 0) continue;
      weight[u * k + v] = w(u, v) * (common / static_cast<std::int64_t>(comp.counts[u] * comp.counts[v]));
      all_zero = all_zero && weight[u * k + v] == 0;
    }

  BigInt abs_sum = 0;
  if (!all_zero) {
    std::vector<std::int64_t> seen(k);
    std::vector<std::int64_t> z(k * k);
    std::uint64_t chunk = 0;  // flushed into abs_sum before it can overflow
    for_each_arrangement(comp.counts, [&](const std::vector<int>& idx) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(z.begin(), z.end(), 0);
      for (int x : idx) {
        auto vv = static_cast<std::size_t>(x);
        for (std::size_t u = 0; u < k; ++u) {
          z[u * k + vv] += seen[u];
          z[vv * k + u] -= seen[u];
        }
        ++seen[vv];
      }
      std::int64_t s = 0;
      for (std::size_t u = 0; u < k; ++u)
        for (std::size_t v = u + 1; v < k; ++v) s += weight[u * k + v] * z[u * k + v];
      chunk += static_cast<std::uint64_t>(s < 0 ? -s : s);
      if (chunk > (std::uint64_t{1} << 62)) {
        abs_sum += static_cast<unsigned long>(chunk);
        chunk = 0;
      }
    });
    abs_sum += static_cast<unsigned long>(chunk);
  }
  const BigInt orbit = comp.orbit_size();
  Rational value(abs_sum * static_cast<unsigned long>(n), orbit * common * 4);
  value.canonicalize();
  return {value, source.cards(), orbit, 1};
}

// ---------------------------------------------------------------------------
// Fixed target

/// theta(D) relative to the dealing pattern D'.
inline Rational theta(const Deck& source, const Deck& target) {
  require_same_composition(source, target);
  const auto z = z_matrix(target);
  const auto comp = target.composition();
  Rational sum = 0;
  for (std::size_t i = 0; i + 1 < source.size(); ++i) {
    auto u = static_cast<std::size_t>(target.index_of(source[i]));
    auto v = static_cast<std::size_t>(target.index_of(source[i + 1]));
    if (u == v) continue;
    sum += ratio(z(u, v), static_cast<long>(comp.counts[u] * comp.counts[v]));
  }
  sum.canonicalize();
  return sum;
}

/// Increments of scale * theta for every digraph u-v of a pattern.
struct ThetaIncrements {
  std::vector<std::size_t> counts;
  std::int64_t scale = 1;
  std::vector<std::int64_t> step;  // k x k, step[u*k+v] = scale * Z(u,v) / (n_u n_v)

  std::size_t values() const { return counts.size(); }
};

inline ThetaIncrements theta_increments(const Deck& target) {
  ThetaIncrements t;
  t.counts = target.composition().counts;
  const std::size_t k = t.counts.size();
  for (auto c : t.counts)
    if (c == 0) throw std::invalid_argument("alphabet values with zero count are not allowed in a dealing pattern");
  const auto z = z_matrix(target);
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = u + 1; v < k; ++v) {
      const auto den = static_cast<std::int64_t>(t.counts[u] * t.counts[v]);
      const auto zz = z(u, v) < 0 ? -z(u, v) : z(u, v);
      t.scale = std::lcm(t.scale, den / std::gcd(zz, den));
    }
  t.step.assign(k * k, 0);
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = 0; v < k; ++v) {
      if (u == v) continue;
      const auto den = static_cast<std::int64_t>(t.counts[u] * t.counts[v]);
      t.step[u * k + v] = z(u, v) * t.scale / den;
    }
  return t;
}

/// Exact kappabar1 by summing |c1(D, D')| over every source D in the orbit.
inline KappaResult kappabar1_enum(const Deck& target, const Budget& budget = {}) {
  const auto comp = target.composition();
  check_orbit_budget(comp, budget);
  const auto inc = theta_increments(target);
  const std::size_t k = inc.values();
  std::uint64_t chunk = 0;
  BigInt abs_sum = 0;
  for_each_arrangement(comp.counts, [&](const std::vector<int>& idx) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
      s += inc.step[static_cast<std::size_t>(idx[i]) * k + static_cast<std::size_t>(idx[i + 1])];
    chunk += static_cast<std::uint64_t>(s < 0 ? -s : s);
    if (chunk > (std::uint64_t{1} << 62)) {
      abs_sum += static_cast<unsigned long>(chunk);
      chunk = 0;
    }
  });
  abs_sum += static_cast<unsigned long>(chunk);
  const BigInt orbit = comp.orbit_size();
  Rational value(abs_sum * static_cast<unsigned long>(target.size()), orbit * inc.scale * 4);
  value.canonicalize();
  return {value, target.cards(), orbit, inc.scale};
}

/// Distribution of scale * theta(D) over the orbit of a pattern, split by the
/// last card of D.
struct ThetaDistribution {
  std::string alphabet;
  std::vector<std::size_t> counts;
  std::int64_t scale = 1;
  std::vector<std::map<std::int64_t, BigInt>> by_last_value;

  BigInt total() const {
    BigInt t = 0;
    for (const auto& m : by_last_value)
      for (const auto& [key, c] : m) t += c;
    return t;
  }
  std::map<std::int64_t, BigInt> merged() const {
    std::map<std::int64_t, BigInt> out;
    for (const auto& m : by_last_value)
      for (const auto& [key, c] : m) out[key] += c;
    return out;
  }
};

namespace detail {

template <typename Count>
struct Bucket {
  std::int64_t lo = 0;
  std::vector<Count> counts;  // counts[j] is the number of decks with scale*theta == lo + j
};

/// g_{m,v} = sum_u t^{step(u,v)} g_{m - e_v, u}, evaluated layer by layer in |m|.
/// Only the previous layer is kept alive. Returns the buckets of the full
/// composition for each last value v.
template <typename Count>
std::vector<Bucket<Count>> theta_recursion(const ThetaIncrements& inc) {
  const std::size_t k = inc.values();
  std::vector<std::size_t> stride(k + 1, 1);
  for (std::size_t v = 0; v < k; ++v) stride[v + 1] = stride[v] * (inc.counts[v] + 1);
  const std::size_t states = stride[k];
  std::size_t n = 0;
  for (auto c : inc.counts) n += c;

  std::vector<std::vector<std::uint32_t>> layers(n + 1);
  std::vector<std::size_t> digits(k);
  for (std::size_t idx = 0; idx < states; ++idx) {
    std::size_t t = 0;
    for (std::size_t v = 0; v < k; ++v) t += (idx / stride[v]) % (inc.counts[v] + 1);
    layers[t].push_back(static_cast<std::uint32_t>(idx));
  }

  std::vector<Bucket<Count>> store(states * k);
  auto digit = [&](std::size_t idx, std::size_t v) { return (idx / stride[v]) % (inc.counts[v] + 1); };

  for (std::uint32_t idx : layers[1]) {
    for (std::size_t v = 0; v < k; ++v)
      if (digit(idx, v) == 1) store[idx * k + v] = Bucket<Count>{0, {Count(1)}};
  }
  for (std::size_t t = 2; t <= n; ++t) {
    for (std::uint32_t idx : layers[t]) {
      for (std::size_t v = 0; v < k; ++v) {
        if (digit(idx, v) == 0) continue;
        const std::size_t prev = idx - stride[v];
        std::int64_t lo = std::numeric_limits<std::int64_t>::max();
        std::int64_t hi = std::numeric_limits<std::int64_t>::min();
        for (std::size_t u = 0; u < k; ++u) {
          const auto& src = store[prev * k + u];
          if (src.counts.empty()) continue;
          const std::int64_t shift = inc.step[u * k + v];
          lo = std::min(lo, src.lo + shift);
          hi = std::max(hi, src.lo + shift + static_cast<std::int64_t>(src.counts.size()) - 1);
        }
        auto& dst = store[idx * k + v];
        dst.lo = lo;
        dst.counts.assign(static_cast<std::size_t>(hi - lo + 1), Count(0));
        for (std::size_t u = 0; u < k; ++u) {
          const auto& src = store[prev * k + u];
          if (src.counts.empty()) continue;
          Count* out = dst.counts.data() + (src.lo + inc.step[u * k + v] - lo);
          const Count* in = src.counts.data();
          const std::size_t len = src.counts.size();
          for (std::size_t j = 0; j < len; ++j) out[j] += in[j];
        }
      }
    }
    for (std::uint32_t idx : layers[t - 1])
      for (std::size_t v = 0; v < k; ++v) std::vector<Count>().swap(store[idx * k + v].counts);
  }

  std::vector<Bucket<Count>> out(k);
  const std::size_t full = states - 1;
  for (std::size_t v = 0; v < k; ++v) out[v] = std::move(store[full * k + v]);
  return out;
}

inline BigInt count_to_big(const BigInt& c) { return c; }
inline BigInt count_to_big(unsigned __int128 c) { return to_bigint(c); }

inline void check_theta_budget(const ThetaIncrements& inc, const Budget& budget) {
  BigInt states = static_cast<unsigned long>(inc.values());
  for (auto c : inc.counts) states *= static_cast<unsigned long>(c + 1);
  if (states > BigInt(static_cast<unsigned long>(budget.max_theta_states)))
    throw budget_exceeded("theta recursion needs " + states.get_str() + " states, budget is " +
                              std::to_string(budget.max_theta_states),
                          states);
}

/// Runs the recursion with 128-bit counts when every count fits (each count
/// is at most the orbit size), otherwise with arbitrary precision.
template <typename Visit>
void with_theta_buckets(const ThetaIncrements& inc, Visit&& visit) {
  const BigInt orbit = multinomial(inc.counts);
  if (orbit < (BigInt(1) << 126)) {
    const auto buckets = theta_recursion<unsigned __int128>(inc);
    for (std::size_t v = 0; v < buckets.size(); ++v)
      for (std::size_t j = 0; j < buckets[v].counts.size(); ++j)
        if (buckets[v].counts[j] != 0)
          visit(v, buckets[v].lo + static_cast<std::int64_t>(j), count_to_big(buckets[v].counts[j]));
  } else {
    const auto buckets = theta_recursion<BigInt>(inc);
    for (std::size_t v = 0; v < buckets.size(); ++v)
      for (std::size_t j = 0; j < buckets[v].counts.size(); ++j)
        if (buckets[v].counts[j] != 0) visit(v, buckets[v].lo + static_cast<std::int64_t>(j), buckets[v].counts[j]);
  }
}

}  // namespace detail

inline ThetaDistribution theta_distribution(const Deck& target, const Budget& budget = {}) {
  const auto inc = theta_increments(target);
  detail::check_theta_budget(inc, budget);
  ThetaDistribution dist{target.alphabet(), inc.counts, inc.scale,
                         std::vector<std::map<std::int64_t, BigInt>>(inc.values())};
  detail::with_theta_buckets(inc, [&](std::size_t v, std::int64_t key, const BigInt& count) {
    dist.by_last_value[v][key] = count;
  });
  return dist;
}

/// Exact kappabar1 of a dealing pattern via the theta recursion.
inline KappaResult kappabar1(const Deck& target, const Budget& budget = {}) {
  const auto inc = theta_increments(target);
  detail::check_theta_budget(inc, budget);
  BigInt abs_sum = 0;
  detail::with_theta_buckets(inc, [&](std::size_t, std::int64_t key, const BigInt& count) {
    abs_sum += count * static_cast<unsigned long>(key < 0 ? -key : key);
  });
  const BigInt orbit = multinomial(inc.counts);
  Rational value(abs_sum * static_cast<unsigned long>(target.size()), orbit * inc.scale * 4);
  value.canonicalize();
  return {value, target.cards(), orbit, inc.scale};
}

struct CutSweepEntry {
  std::size_t k;
  KappaResult kappa;
};

/// kappabar1 of cut(pattern, k) for k = 0..n-1.
inline std::vector<CutSweepEntry> cut_sweep(const Deck& target, const Budget& budget = {}) {
  std::vector<CutSweepEntry> out;
  out.reserve(target.size());
  for (std::size_t k = 0; k < target.size(); ++k) out.push_back({k, kappabar1(cut(target, k), budget)});
  return out;
}

/// Position of the smallest kappabar1 in a sweep (first one on ties).
inline std::size_t sweep_argmin(const std::vector<CutSweepEntry>& sweep) {
  if (sweep.empty()) throw std::invalid_argument("empty sweep");
  std::size_t best = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].kappa.value < sweep[best].kappa.value) best = i;
  return sweep[best].k;
}

}  // namespace riffle
