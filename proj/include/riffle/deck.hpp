#pragma once

// Decks, dealing patterns and the pair/digraph statistics.
//
// A deck is a string of single-character card values together with an
// ordered alphabet. The same type describes a dealing pattern: position i
// of a pattern names the hand that receives the i-th card of the shuffled
// deck. All positions are 0-based in code.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "riffle/numeric.hpp"

namespace riffle {

/// Thrown when an exhaustive computation would exceed its configured budget.
class budget_exceeded : public std::runtime_error {
 public:
  budget_exceeded(const std::string& what, BigInt required)
      : std::runtime_error(what), required_(std::move(required)) {}
  const BigInt& required() const { return required_; }

 private:
  BigInt required_;
};

/// Thrown by parse_pattern; position() is the 0-based offset of the problem.
class pattern_error : public std::invalid_argument {
 public:
  pattern_error(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Limits for exhaustive enumeration.
struct Budget {
  std::size_t max_deck_size = 12;         // for scans over S_n or T(D,D')
  std::uint64_t max_orbit = 10'000'000;   // for scans over Orb(D)
  std::uint64_t max_theta_states = 50'000'000;  // k * prod(n_v + 1) for the theta recursion
};

inline bool is_card_symbol(char c) {
  return c > ' ' && c < 127 && c != '(' && c != ')' && c != '^';
}

struct Composition {
  std::string alphabet;
  std::vector<std::size_t> counts;

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  BigInt orbit_size() const { return multinomial(counts); }
  /// prod n_v!, the size of each transition set T(D, D').
  BigInt stabilizer_size() const {
    BigInt s = 1;
    for (auto c : counts) s *= factorial(c);
    return s;
  }
  bool operator==(const Composition&) const = default;
};

class Deck {
 public:
  Deck() = default;

  /// An empty alphabet means first-appearance order of the cards.
  explicit Deck(std::string cards, std::string alphabet = {})
      : cards_(std::move(cards)), alphabet_(std::move(alphabet)) {
    if (cards_.empty()) throw std::invalid_argument("deck must contain at least one card");
    if (alphabet_.empty()) {
      for (char c : cards_)
        if (alphabet_.find(c) == std::string::npos) alphabet_.push_back(c);
    }
    index_.fill(-1);
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      auto c = static_cast<unsigned char>(alphabet_[i]);
      if (!is_card_symbol(alphabet_[i])) throw std::invalid_argument("invalid card symbol in alphabet");
      if (index_[c] >= 0) throw std::invalid_argument(std::string("duplicate alphabet symbol '") + alphabet_[i] + "'");
      index_[c] = static_cast<int>(i);
    }
    for (char c : cards_)
      if (index_[static_cast<unsigned char>(c)] < 0)
        throw std::invalid_argument(std::string("card '") + c + "' is not in the alphabet");
  }

  const std::string& cards() const { return cards_; }
  const std::string& alphabet() const { return alphabet_; }
  std::size_t size() const { return cards_.size(); }
  std::size_t num_values() const { return alphabet_.size(); }
  char operator[](std::size_t i) const { return cards_[i]; }

  /// Alphabet index of a value, or -1 if the value is not in the alphabet.
  int index_of(char value) const { return index_[static_cast<unsigned char>(value)]; }

  std::vector<int> value_indices() const {
    std::vector<int> out(cards_.size());
    for (std::size_t i = 0; i < cards_.size(); ++i) out[i] = index_of(cards_[i]);
    return out;
  }

  Composition composition() const {
    Composition c{alphabet_, std::vector<std::size_t>(alphabet_.size(), 0)};
    for (char x : cards_) ++c.counts[static_cast<std::size_t>(index_of(x))];
    return c;
  }

  /// Another arrangement over the same alphabet.
  Deck with_cards(std::string cards) const { return Deck(std::move(cards), alphabet_); }

  bool operator==(const Deck& o) const { return cards_ == o.cards_ && alphabet_ == o.alphabet_; }

 private:
  std::string cards_;
  std::string alphabet_;
  std::array<int, 256> index_{};
};

inline bool same_multiset(const Deck& a, const Deck& b) {
  std::string x = a.cards(), y = b.cards();
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

inline void require_same_composition(const Deck& a, const Deck& b) {
  if (!same_multiset(a, b))
    throw std::invalid_argument("decks '" + a.cards() + "' and '" + b.cards() + "' have different compositions");
}

// ---------------------------------------------------------------------------
// Pattern grammar:  pattern := term+ ;  term := symbol | "(" symbol+ ")" "^" count

inline Deck parse_pattern(std::string_view text, std::string alphabet = {}) {
  std::string out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_ws();
  if (i == text.size()) throw pattern_error("empty pattern", i);
  while (i < text.size()) {
    char c = text[i];
    if (c == '(') {
      std::size_t open = i++;
      std::string group;
      while (i < text.size() && is_card_symbol(text[i])) group.push_back(text[i++]);
      if (i == text.size() || text[i] != ')') throw pattern_error("expected ')'", i);
      if (group.empty()) throw pattern_error("empty group", open);
      ++i;
      if (i == text.size() || text[i] != '^') throw pattern_error("expected '^' after group", i);
      ++i;
      std::size_t digits_at = i;
      std::uint64_t reps = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        reps = reps * 10 + static_cast<std::uint64_t>(text[i++] - '0');
        if (reps > 1'000'000) throw pattern_error("repetition count too large", digits_at);
      }
      if (i == digits_at) throw pattern_error("expected repetition count", i);
      if (reps == 0) throw pattern_error("repetition count must be positive", digits_at);
      for (std::uint64_t r = 0; r < reps; ++r) out += group;
    } else if (is_card_symbol(c)) {
      out.push_back(c);
      ++i;
    } else {
      throw pattern_error(std::string("unexpected character '") + c + "'", i);
    }
    skip_ws();
  }
  if (out.empty()) throw pattern_error("pattern expands to no cards", 0);
  return Deck(std::move(out), std::move(alphabet));
}

enum class DealStyle { ordered, cyclic, back_and_forth };

/// Hand labels: N, E, S, W for up to four players, otherwise 1-9, A-Z, a-z.
inline std::string player_symbols(std::size_t players) {
  if (players <= 4) return std::string("NESW").substr(0, players);
  static const std::string pool = "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  if (players > pool.size()) throw std::invalid_argument("too many players");
  return pool.substr(0, players);
}

inline Deck make_pattern(DealStyle style, std::size_t players, std::size_t hand_size) {
  if (players == 0 || hand_size == 0) throw std::invalid_argument("players and hand size must be positive");
  const std::string sym = player_symbols(players);
  std::string out;
  out.reserve(players * hand_size);
  switch (style) {
    case DealStyle::ordered:
      for (char p : sym) out.append(hand_size, p);
      break;
    case DealStyle::cyclic:
      for (std::size_t r = 0; r < hand_size; ++r) out += sym;
      break;
    case DealStyle::back_and_forth:
      for (std::size_t r = 0; r < hand_size; ++r) {
        if (r % 2 == 0) out += sym;
        else out.append(sym.rbegin(), sym.rend());
      }
      break;
  }
  return Deck(std::move(out), sym);
}

/// Pattern in original-deck coordinates after the top k cards are moved to
/// the bottom before dealing: result[i] = pattern[(i - k) mod n].
inline Deck cut(const Deck& pattern, std::size_t k) {
  const std::size_t n = pattern.size();
  if (k >= n) throw std::out_of_range("cut position must satisfy 0 <= k < n");
  std::string out(n, ' ');
  for (std::size_t i = 0; i < n; ++i) out[i] = pattern[(i + n - k) % n];
  return pattern.with_cards(std::move(out));
}

// ---------------------------------------------------------------------------
// Digraph and pair statistics. Values absent from the deck simply count zero.

inline std::uint64_t count_digraphs(const Deck& d, char u, char v) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    if (d[i] == u && d[i + 1] == v) ++c;
  return c;
}

inline std::uint64_t count_pairs(const Deck& d, char u, char v) {
  std::uint64_t seen_u = 0, c = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == v) c += seen_u;
    if (d[i] == u) ++seen_u;
  }
  return c;
}

inline std::int64_t w_stat(const Deck& d, char u, char v) {
  return static_cast<std::int64_t>(count_digraphs(d, u, v)) - static_cast<std::int64_t>(count_digraphs(d, v, u));
}

inline std::int64_t z_stat(const Deck& d, char u, char v) {
  return static_cast<std::int64_t>(count_pairs(d, u, v)) - static_cast<std::int64_t>(count_pairs(d, v, u));
}

/// Antisymmetric k x k matrix of W or Z values, rows/columns in alphabet order.
struct StatMatrix {
  std::string alphabet;
  std::vector<std::int64_t> entries;  // row-major

  std::size_t dim() const { return alphabet.size(); }
  std::int64_t operator()(std::size_t u, std::size_t v) const { return entries[u * dim() + v]; }
  std::int64_t& operator()(std::size_t u, std::size_t v) { return entries[u * dim() + v]; }
  bool operator==(const StatMatrix&) const = default;
};
using ZMatrix = StatMatrix;
using WMatrix = StatMatrix;

inline ZMatrix z_matrix(const Deck& d) {
  const std::size_t k = d.num_values();
  ZMatrix m{d.alphabet(), std::vector<std::int64_t>(k * k, 0)};
  std::vector<std::int64_t> seen(k, 0);
  for (int x : d.value_indices()) {
    auto v = static_cast<std::size_t>(x);
    for (std::size_t u = 0; u < k; ++u) {
      m(u, v) += seen[u];
      m(v, u) -= seen[u];
    }
    ++seen[v];
  }
  return m;
}

inline WMatrix w_matrix(const Deck& d) {
  const std::size_t k = d.num_values();
  WMatrix m{d.alphabet(), std::vector<std::int64_t>(k * k, 0)};
  auto idx = d.value_indices();
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    auto u = static_cast<std::size_t>(idx[i]), v = static_cast<std::size_t>(idx[i + 1]);
    if (u == v) continue;
    m(u, v) += 1;
    m(v, u) -= 1;
  }
  return m;
}

/// North-east lattice path of the u/v cards of a deck: 'N' for each u, 'E'
/// for each v. area_below counts u-v pairs (squares south-east of the path),
/// area_above counts v-u pairs (the Young shape to the north-west).
struct LatticePath {
  char u = 0, v = 0;
  std::string steps;
  std::uint64_t area_below = 0;
  std::uint64_t area_above = 0;
  std::int64_t difference() const {
    return static_cast<std::int64_t>(area_below) - static_cast<std::int64_t>(area_above);
  }
};

inline LatticePath lattice_path(const Deck& d, char u, char v) {
  if (u == v) throw std::invalid_argument("lattice path needs two distinct values");
  LatticePath p{u, v, {}, 0, 0};
  std::uint64_t norths = 0, easts = 0;
  for (char c : d.cards()) {
    if (c == u) {
      p.steps.push_back('N');
      p.area_above += easts;
      ++norths;
    } else if (c == v) {
      p.steps.push_back('E');
      p.area_below += norths;
      ++easts;
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Orbit enumeration: every distinct rearrangement, lexicographic in alphabet order.

inline std::string sorted_cards(const Composition& c) {
  std::string s;
  for (std::size_t i = 0; i < c.counts.size(); ++i) s.append(c.counts[i], c.alphabet[i]);
  return s;
}

inline void check_orbit_budget(const Composition& c, const Budget& budget) {
  BigInt n = c.orbit_size();
  if (n > BigInt(static_cast<unsigned long>(budget.max_orbit)))
    throw budget_exceeded("orbit size " + n.get_str() + " exceeds enumeration budget of " +
                              std::to_string(budget.max_orbit),
                          n);
}

/// Calls fn(const std::vector<int>&) with each arrangement of value indices,
/// in lexicographic order. No budget check.
template <typename Fn>
void for_each_arrangement(const std::vector<std::size_t>& counts, Fn&& fn) {
  std::vector<int> idx;
  for (std::size_t v = 0; v < counts.size(); ++v) idx.insert(idx.end(), counts[v], static_cast<int>(v));
  if (idx.empty()) return;
  do {
    fn(static_cast<const std::vector<int>&>(idx));
  } while (std::next_permutation(idx.begin(), idx.end()));
}

/// Calls fn(const Deck&) for each deck in the orbit.
template <typename Fn>
void for_each_in_orbit(const Composition& c, const Budget& budget, Fn&& fn) {
  check_orbit_budget(c, budget);
  std::string cards(c.total(), ' ');
  for_each_arrangement(c.counts, [&](const std::vector<int>& idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) cards[i] = c.alphabet[static_cast<std::size_t>(idx[i])];
    fn(Deck(cards, c.alphabet));
  });
}

inline std::vector<Deck> enumerate_orbit(const Composition& c, const Budget& budget = {}) {
  std::vector<Deck> out;
  for_each_in_orbit(c, budget, [&](const Deck& d) { out.push_back(d); });
  return out;
}

}  // namespace riffle
