#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "riffle/asymptotics.hpp"

using namespace riffle;

namespace {

const char* kKappa52 =
    "146020943891326775423340146124729913263177343486982212261189487693/"
    "3314356310443124530393681659122442758682178888925184000000000000";

Deck poker() { return parse_pattern("(1234)^5(5)^32"); }

// 1/2 sum |c1| over the orbit, straight from the definition.
Rational half_abs_c1_over_sources(const Deck& target) {
  Rational s = 0;
  for (const auto& src : oracle::orbit(target.cards())) s += abs(c1(target.with_cards(src), target));
  return s / 2;
}

Rational half_abs_c1_over_targets(const Deck& source) {
  Rational s = 0;
  for (const auto& dst : oracle::orbit(source.cards())) s += abs(c1(source, source.with_cards(dst)));
  return s / 2;
}

}  // namespace

TEST(C1, SmallExamples) {
  EXPECT_EQ(c1(Deck("AB"), Deck("AB")), Rational(1, 2));
  EXPECT_EQ(c1(Deck("AB"), Deck("BA", "AB")), Rational(-1, 2));
  EXPECT_EQ(c1(Deck("AABB"), Deck("BABA", "AB")), Rational(-1, 6));
  EXPECT_EQ(c1(Deck("ABBA"), Deck("AABB")), 0);
}

TEST(C1, MatchesMeanOfAscentsMinusDescents) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& cards : oracle::canonical_decks(n, 3)) {
      Deck src(cards, std::string("ABC").substr(0, Deck(cards).num_values()));
      Rational scale(static_cast<long>(n), 2 * src.composition().orbit_size());
      scale.canonicalize();
      for (const auto& dst : oracle::orbit(cards)) {
        Deck target = src.with_cards(dst);
        EXPECT_EQ(c1(src, target), scale * expected_asc_minus_des(src, target)) << cards << "->" << dst;
      }
    }
}

TEST(C1, SumsToZeroOverTargets) {
  for (std::string cards : {"AB", "AABB", "ABCAB", "AABBCC", "ABCDA"}) {
    Deck d(cards);
    Rational s = 0;
    for (const auto& dst : oracle::orbit(cards)) s += c1(d, d.with_cards(dst));
    EXPECT_EQ(s, 0) << cards;
  }
}

TEST(Theta, RelatesToC1) {
  for (std::string cards : {"NE", "NNEE", "NESNES", "AABBCD"}) {
    Deck target(cards);
    const auto comp = target.composition();
    for (const auto& src : oracle::orbit(cards)) {
      Deck s = target.with_cards(src);
      EXPECT_EQ(c1(s, target), theta(s, target) * static_cast<long>(target.size()) / (2 * comp.orbit_size()))
          << src << " " << cards;
    }
  }
  EXPECT_EQ(theta(Deck("NE"), Deck("NE")), 1);
}

TEST(Kappa1Distinct, FiftyTwoCards) {
  const auto k = kappa1_distinct(52);
  EXPECT_EQ(to_fraction(k), kKappa52);
  EXPECT_NEAR(to_double(k), 44.0571, 5e-5);
  EXPECT_EQ(kappa1_distinct(1), 0);
  EXPECT_EQ(kappa1_distinct(2), Rational(1, 2));
}

TEST(Kappa1Distinct, AgreesWithOrbitSum) {
  const std::string letters = "abcdefg";
  for (std::size_t n = 1; n <= 6; ++n) {
    Deck d(letters.substr(0, n));
    EXPECT_EQ(kappa1_enum(d).value, kappa1_distinct(n)) << n;
    EXPECT_EQ(half_abs_c1_over_targets(d), kappa1_distinct(n)) << n;
  }
}

TEST(Kappa1Approx, TracksExactValue) {
  EXPECT_NEAR(kappa1_approx(52) / to_double(kappa1_distinct(52)), 1.0, 0.02);
  for (std::size_t n = 3; n < 80; ++n) EXPECT_LT(kappa1_approx(n), kappa1_approx(n + 1));
}

TEST(Kappa1Enum, FrozenValues) {
  EXPECT_EQ(kappa1_enum(Deck("ABAB")).value, Rational(1, 2));
  EXPECT_EQ(kappa1_enum(Deck("AABB")).value, Rational(1, 2));
  EXPECT_EQ(kappa1_enum(Deck("ABC")).value, Rational(1, 2));
  EXPECT_EQ(kappa1_enum(Deck("abcd")).value, Rational(7, 6));
  EXPECT_EQ(kappa1_enum(Deck("ABBA")).value, 0);
}

TEST(Kappa1Enum, MatchesDefinitionOnSmallDecks) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& cards : oracle::canonical_decks(n, 4))
      EXPECT_EQ(kappa1_enum(Deck(cards)).value, half_abs_c1_over_targets(Deck(cards))) << cards;
}

TEST(Kappa1Enum, TwoValueDecksWithMatchingEndsVanish) {
  for (std::size_t n = 2; n <= 10; ++n)
    for (const auto& cards : oracle::canonical_decks(n, 2)) {
      if (Deck(cards).num_values() != 2 || cards.front() != cards.back()) continue;
      EXPECT_EQ(kappa1_enum(Deck(cards)).value, 0) << cards;
    }
}

TEST(Kappa1Enum, RefusesLargeOrbits) {
  EXPECT_THROW(kappa1_enum(make_pattern(DealStyle::cyclic, 4, 13)), budget_exceeded);
}

TEST(Kappabar1, FrozenValues) {
  EXPECT_EQ(kappabar1(Deck("ABAB")).value, Rational(1, 3));
  EXPECT_EQ(kappabar1(Deck("AABB")).value, Rational(2, 3));
  EXPECT_EQ(kappabar1(Deck("ABBA")).value, 0);
  EXPECT_EQ(kappabar1(Deck("ABC")).value, Rational(1, 2));
  EXPECT_EQ(kappabar1(Deck("A")).value, 0);
}

TEST(Kappabar1, PokerAndBridge) {
  EXPECT_EQ(to_fraction(kappabar1(poker()).value), "1041539930128654272599/123600572196960202344");
  EXPECT_EQ(kappabar1(poker()).scale, 5);
  EXPECT_EQ(to_fraction(kappabar1(cut(poker(), 16)).value), "523485619699747366033/126685078454994859800");
  const auto ord = kappabar1(make_pattern(DealStyle::ordered, 4, 13)).value;
  EXPECT_EQ(to_fraction(ord), "93574839271687495932003418573/3352796110343049552452340000");
  EXPECT_EQ(kappabar1(make_pattern(DealStyle::cyclic, 4, 13)).value, ord / 13);
  EXPECT_EQ(kappabar1(make_pattern(DealStyle::back_and_forth, 4, 13)).value, ord / 169);
}

TEST(Kappabar1, MatchesOrbitScanAndDefinition) {
  for (std::size_t n = 1; n <= 7; ++n)
    for (const auto& cards : oracle::canonical_decks(n, 4)) {
      const Deck d(cards);
      const auto fast = kappabar1(d);
      EXPECT_EQ(fast.value, kappabar1_enum(d).value) << cards;
      EXPECT_EQ(fast.orbit_size, d.composition().orbit_size());
      if (n <= 6) {
        EXPECT_EQ(fast.value, half_abs_c1_over_sources(d)) << cards;
      }
    }
}

TEST(Kappabar1, RandomLargerDecks) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 8 + static_cast<std::size_t>(trial) % 3;
    Deck d(oracle::random_deck(rng, n, 2 + static_cast<std::size_t>(trial) % 3));
    EXPECT_EQ(kappabar1(d).value, kappabar1_enum(d).value) << d.cards();
  }
}

TEST(Kappabar1, LinearInZ) {
  // Z(ABAB) is half of Z(AABB) with the same composition.
  EXPECT_EQ(kappabar1(Deck("ABAB")).value * 2, kappabar1(Deck("AABB")).value);
  EXPECT_EQ(z_matrix(Deck("AABB"))(0, 1), 2 * z_matrix(Deck("ABAB"))(0, 1));
}

TEST(Kappabar1, IndependentOfAlphabetOrder) {
  for (std::string cards : {"AABCB", "ABCABCD", "NNESWE"}) {
    Deck d(cards);
    std::string rev = d.alphabet();
    std::reverse(rev.begin(), rev.end());
    EXPECT_EQ(kappabar1(Deck(cards, rev)).value, kappabar1(d).value) << cards;
    EXPECT_EQ(kappa1_enum(Deck(cards, rev)).value, kappa1_enum(d).value) << cards;
  }
}

TEST(ThetaDistribution, CountsWholeOrbit) {
  for (std::string cards : {"ABAB", "AABBC", "NESWWSEN"}) {
    Deck d(cards);
    const auto dist = theta_distribution(d);
    EXPECT_EQ(dist.total(), d.composition().orbit_size());
    std::map<std::int64_t, BigInt> brute;
    for (const auto& src : oracle::orbit(cards)) {
      Rational key = theta(d.with_cards(src), d) * dist.scale;
      ASSERT_EQ(key.get_den(), 1) << src;
      brute[key.get_num().get_si()] += 1;
    }
    EXPECT_EQ(dist.merged(), brute) << cards;
  }
}

TEST(ThetaDistribution, KeysBoundedForPoker) {
  const auto dist = theta_distribution(poker());
  EXPECT_EQ(dist.total(), poker().composition().orbit_size());
  const auto inc = theta_increments(poker());
  std::int64_t max_step = 0;
  for (auto s : inc.step) max_step = std::max(max_step, std::abs(s));
  for (const auto& [key, count] : dist.merged()) EXPECT_LE(std::abs(key), 51 * max_step);
}

TEST(ThetaIncrements, RejectsUnusedAlphabetValues) {
  EXPECT_THROW(theta_increments(Deck("AB", "ABC")), std::invalid_argument);
}

TEST(CutSweep, PokerMinimumAtSixteen) {
  const auto sweep = cut_sweep(poker());
  ASSERT_EQ(sweep.size(), 52u);
  EXPECT_EQ(sweep_argmin(sweep), 16u);
  EXPECT_EQ(sweep[0].kappa.value, kappabar1(poker()).value);
  for (const auto& e : sweep) EXPECT_GT(e.kappa.value, 0);
}

TEST(CutSweep, SmallDeckMatchesDirectComputation) {
  Deck d("AABCB");
  const auto sweep = cut_sweep(d);
  for (const auto& e : sweep) EXPECT_EQ(e.kappa.value, kappabar1_enum(cut(d, e.k)).value);
  EXPECT_THROW(sweep_argmin({}), std::invalid_argument);
}

TEST(FirstOrder, ExactDistanceApproachesKappaOverA) {
  // the gap is O(1/a^2), so a^2 times it stays bounded as a grows
  for (std::string cards : {"ABAB", "AABBC", "abcde"}) {
    Deck d(cards);
    const auto ks = kappa1_enum(d).value;
    const auto kt = kappabar1(d).value;
    double cap_src = 0, cap_tgt = 0;
    for (std::uint64_t a : {100u, 1000u, 10000u}) {
      const Rational a_sq(static_cast<long>(a * a));
      const double es = to_double(abs(tv_fixed_source(a, d) - ks / static_cast<long>(a)) * a_sq);
      const double et = to_double(abs(tv_fixed_target(a, d) - kt / static_cast<long>(a)) * a_sq);
      if (a == 100) {
        cap_src = 2 * es + 1;
        cap_tgt = 2 * et + 1;
      }
      EXPECT_LT(es, cap_src) << cards << " " << a;
      EXPECT_LT(et, cap_tgt) << cards << " " << a;
    }
  }
}

TEST(FirstOrder, GapWithinErrorBound) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& cards : oracle::canonical_decks(n, 3)) {
      Deck d(cards);
      const auto ks = kappa1_enum(d).value;
      const auto kt = kappabar1(d).value;
      for (std::uint64_t a : {2u, 5u, 16u, 64u}) {
        const auto bound = error_bound(a, n);
        EXPECT_LE(abs(tv_fixed_source(a, d) - ks / static_cast<long>(a)), bound) << cards << " " << a;
        EXPECT_LE(abs(tv_fixed_target(a, d) - kt / static_cast<long>(a)), bound) << cards << " " << a;
      }
    }
}
