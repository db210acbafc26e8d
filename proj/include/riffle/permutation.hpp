#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "riffle/deck.hpp"

namespace riffle {

/// A permutation read as a position map: applied to a deck, the card at
/// position i moves to position images[i].
struct Permutation {
  std::vector<int> images;

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.images.resize(n);
    std::iota(p.images.begin(), p.images.end(), 0);
    return p;
  }

  std::size_t size() const { return images.size(); }

  bool is_valid() const {
    std::vector<char> hit(images.size(), 0);
    for (int x : images) {
      if (x < 0 || static_cast<std::size_t>(x) >= images.size() || hit[static_cast<std::size_t>(x)]) return false;
      hit[static_cast<std::size_t>(x)] = 1;
    }
    return true;
  }

  std::size_t descents() const {
    std::size_t d = 0;
    for (std::size_t i = 0; i + 1 < images.size(); ++i)
      if (images[i] > images[i + 1]) ++d;
    return d;
  }
  std::size_t ascents() const { return images.empty() ? 0 : images.size() - 1 - descents(); }

  Permutation inverse() const {
    Permutation r;
    r.images.resize(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) r.images[static_cast<std::size_t>(images[i])] = static_cast<int>(i);
    return r;
  }

  /// result[images[i]] = cards[i]
  std::string apply(const std::string& cards) const {
    if (cards.size() != images.size()) throw std::invalid_argument("permutation and deck sizes differ");
    std::string out(cards.size(), ' ');
    for (std::size_t i = 0; i < images.size(); ++i) out[static_cast<std::size_t>(images[i])] = cards[i];
    return out;
  }
  Deck apply(const Deck& d) const { return d.with_cards(apply(d.cards())); }

  bool operator==(const Permutation&) const = default;
};

inline std::size_t count_descents(const std::vector<int>& images) {
  std::size_t d = 0;
  for (std::size_t i = 0; i + 1 < images.size(); ++i)
    if (images[i] > images[i + 1]) ++d;
  return d;
}

inline void check_deck_size_budget(std::size_t n, const Budget& budget) {
  if (n > budget.max_deck_size)
    throw budget_exceeded("deck of " + std::to_string(n) + " cards exceeds the exhaustive-scan limit of " +
                              std::to_string(budget.max_deck_size),
                          factorial(n));
}

/// Visits every permutation of {0..n-1} (as an image vector) in lexicographic order.
template <typename Fn>
void for_each_permutation(std::size_t n, Fn&& fn) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    fn(static_cast<const std::vector<int>&>(p));
  } while (std::next_permutation(p.begin(), p.end()));
}

/// Visits every permutation taking `source` to `target`, i.e. every pi with
/// target[pi(i)] == source[i]. There are prod n_v! of them.
template <typename Fn>
void for_each_transition(const Deck& source, const Deck& target, const Budget& budget, Fn&& fn) {
  require_same_composition(source, target);
  const std::size_t n = source.size();
  check_deck_size_budget(n, budget);
  Permutation pi;
  pi.images.assign(n, -1);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      fn(static_cast<const Permutation&>(pi));
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || target[j] != source[i]) continue;
      used[j] = 1;
      pi.images[i] = static_cast<int>(j);
      self(self, i + 1);
      used[j] = 0;
    }
  };
  rec(rec, 0);
}

inline std::vector<Permutation> transition_set(const Deck& source, const Deck& target, const Budget& budget = {}) {
  std::vector<Permutation> out;
  for_each_transition(source, target, budget, [&](const Permutation& p) { out.push_back(p); });
  return out;
}

}  // namespace riffle
