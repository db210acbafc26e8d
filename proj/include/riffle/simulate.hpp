#pragma once

// Monte Carlo a-shuffles.
//
// An a-shuffle is drawn as a word of n i.i.d. digits in {0..a-1}. Packet j
// takes the next #{p : w_p = j} cards from the top of the deck, and output
// position p receives the next unused card of packet w_p. Each word has
// probability a^-n and corresponds to exactly one cut/interleave pair.

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "riffle/deck.hpp"
#include "riffle/exact.hpp"
#include "riffle/numeric.hpp"
#include "riffle/permutation.hpp"

namespace riffle {

/// The deterministic core of the sampler: word of packet digits -> permutation.
inline Permutation permutation_from_word(std::span<const std::uint32_t> word, std::uint64_t a) {
  std::vector<std::size_t> start(a + 1, 0);
  for (auto w : word) {
    if (w >= a) throw std::invalid_argument("word digit out of range");
    ++start[w + 1];
  }
  for (std::size_t j = 0; j < a; ++j) start[j + 1] += start[j];
  Permutation pi;
  pi.images.resize(word.size());
  for (std::size_t p = 0; p < word.size(); ++p) pi.images[start[word[p]]++] = static_cast<int>(p);
  return pi;
}

class ShuffleSampler {
 public:
  /// Streams with the same seed and different stream ids are independent.
  ShuffleSampler(std::uint64_t a, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0)
      : a_(a), n_(n), seed_(seed), word_(n) {
    if (a == 0) throw std::invalid_argument("a must be positive");
    if (n == 0) throw std::invalid_argument("deck size must be positive");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t a() const { return a_; }
  std::size_t deck_size() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  /// Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  Permutation sample() {
    for (auto& w : word_) w = static_cast<std::uint32_t>(uniform(a_));
    return permutation_from_word(word_, a_);
  }

 private:
  std::uint64_t a_;
  std::size_t n_;
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::vector<std::uint32_t> word_;
};

inline Permutation sample_a_shuffle(ShuffleSampler& sampler) { return sampler.sample(); }

inline Deck shuffle_deck(ShuffleSampler& sampler, const Deck& deck) {
  if (deck.size() != sampler.deck_size()) throw std::invalid_argument("sampler and deck sizes differ");
  return sampler.sample().apply(deck);
}

// ---------------------------------------------------------------------------
// Goodness of fit

struct GofResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  std::size_t cells = 0;  // after pooling
};

/// Pearson chi-square of observed counts against exact cell probabilities.
/// Cells with expected count below `min_expected` are pooled (smallest first).
/// Cells of probability zero are dropped; any observation in one gives p = 0.
inline GofResult gof_test(const std::vector<std::uint64_t>& observed, const std::vector<Rational>& probabilities,
                          double min_expected = 5.0) {
  if (observed.size() != probabilities.size()) throw std::invalid_argument("cell count mismatch");
  std::uint64_t trials = 0;
  for (auto o : observed) trials += o;
  if (trials == 0) throw std::invalid_argument("no observations");

  struct Cell {
    double expected;
    double observed;
  };
  std::vector<Cell> cells;
  bool impossible_hit = false;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double p = to_double(probabilities[i]);
    if (probabilities[i] == 0) {
      impossible_hit = impossible_hit || observed[i] > 0;
      continue;
    }
    cells.push_back({p * static_cast<double>(trials), static_cast<double>(observed[i])});
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.expected < y.expected; });
  std::vector<Cell> pooled;
  Cell acc{0, 0};
  for (const auto& c : cells) {
    acc.expected += c.expected;
    acc.observed += c.observed;
    if (acc.expected >= min_expected) {
      pooled.push_back(acc);
      acc = {0, 0};
    }
  }
  if (acc.expected > 0) {
    if (pooled.empty()) pooled.push_back(acc);
    else {
      pooled.back().expected += acc.expected;
      pooled.back().observed += acc.observed;
    }
  }
  if (pooled.size() < 2) throw std::invalid_argument("goodness-of-fit needs at least two cells");

  GofResult r;
  r.cells = pooled.size();
  r.dof = pooled.size() - 1;
  if (impossible_hit) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0;
    return r;
  }
  for (const auto& c : pooled) r.statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  r.p_value = boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, r.statistic / 2.0);
  return r;
}

inline GofResult gof_test(const std::map<std::string, std::uint64_t>& observed,
                          const std::map<std::string, Rational>& probabilities, double min_expected = 5.0) {
  std::vector<std::uint64_t> obs;
  std::vector<Rational> prob;
  for (const auto& [key, p] : probabilities) {
    auto it = observed.find(key);
    obs.push_back(it == observed.end() ? 0 : it->second);
    prob.push_back(p);
  }
  for (const auto& [key, o] : observed)
    if (!probabilities.contains(key)) {
      obs.push_back(o);
      prob.push_back(0);
    }
  return gof_test(obs, prob, min_expected);
}

// ---------------------------------------------------------------------------
// Variation distance estimates

enum class TvMode { fixed_source, fixed_target };

inline const char* to_string(TvMode m) { return m == TvMode::fixed_source ? "fixed_source" : "fixed_target"; }

struct SimReport {
  std::uint64_t trials = 0;
  std::uint64_t a = 1;
  TvMode mode = TvMode::fixed_source;
  std::uint64_t seed = 0;
  std::string deck;
  BigInt orbit_size;
  std::map<std::string, std::uint64_t> frequencies;
  double tv_estimate = 0;
  double standard_error = 0;
  double bias_bound = 0;  // 0.5 * sqrt((N - 1) / trials), bounds E[estimate] - tv
  std::optional<Rational> exact_tv;
  std::optional<GofResult> gof;
};

struct SimOptions {
  std::uint64_t max_orbit = 100'000;
  bool with_exact = true;  // exact reference when the deck fits the scan budget
  Budget budget{10};
};

/// Plug-in estimate of the variation distance from uniform.
///
/// fixed_source: shuffle `deck` and tally the resulting arrangement.
/// fixed_target: shuffle a deck of distinct cards, deal it with the pattern
/// `deck` and tally which hand each original card lands in, i.e. the source
/// arrangement D with pi * D = D'.
inline SimReport estimate_tv(ShuffleSampler& sampler, TvMode mode, const Deck& deck, std::uint64_t trials,
                             const SimOptions& options = {}) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (deck.size() != sampler.deck_size()) throw std::invalid_argument("sampler and deck sizes differ");
  const auto comp = deck.composition();
  const BigInt orbit = comp.orbit_size();
  if (orbit > BigInt(static_cast<unsigned long>(options.max_orbit)))
    throw budget_exceeded("orbit of " + orbit.get_str() + " decks is too large to tally (limit " +
                              std::to_string(options.max_orbit) +
                              "); use the exact engine or the kappa asymptotics instead",
                          orbit);

  const std::size_t n = deck.size();
  std::unordered_map<std::string, std::uint64_t> tally;
  std::string outcome(n, ' ');
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto pi = sampler.sample();
    if (mode == TvMode::fixed_source) {
      for (std::size_t i = 0; i < n; ++i) outcome[static_cast<std::size_t>(pi.images[i])] = deck[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) outcome[i] = deck[static_cast<std::size_t>(pi.images[i])];
    }
    ++tally[outcome];
  }

  SimReport r;
  r.trials = trials;
  r.a = sampler.a();
  r.mode = mode;
  r.seed = sampler.seed();
  r.deck = deck.cards();
  r.orbit_size = orbit;
  r.frequencies.insert(tally.begin(), tally.end());

  const double big_n = orbit.get_d();
  const double uniform = 1.0 / big_n;
  const double tr = static_cast<double>(trials);
  double l1 = 0, signed_mass = 0;
  for (const auto& [key, c] : r.frequencies) {
    const double f = static_cast<double>(c) / tr;
    l1 += std::fabs(f - uniform);
    signed_mass += f >= uniform ? f : -f;
  }
  l1 += (big_n - static_cast<double>(r.frequencies.size())) * uniform;
  r.tv_estimate = 0.5 * l1;
  r.standard_error = std::sqrt(std::max(0.0, 1.0 - signed_mass * signed_mass) / (4.0 * tr));
  r.bias_bound = 0.5 * std::sqrt((big_n - 1.0) / tr);

  if (options.with_exact && n <= options.budget.max_deck_size) {
    const auto exact = mode == TvMode::fixed_source ? transition_distribution_from(sampler.a(), deck, options.budget)
                                                    : transition_distribution_to(sampler.a(), deck, options.budget);
    r.exact_tv = tv_from_uniform(exact, orbit);
    std::size_t support = 0;
    for (const auto& [key, p] : exact) support += p > 0 ? 1 : 0;
    if (support >= 2) {
      try {
        r.gof = gof_test(r.frequencies, exact);
      } catch (const std::invalid_argument&) {
        // everything pooled into one cell; no test to report
      }
    }
  }
  return r;
}

}  // namespace riffle
