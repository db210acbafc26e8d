// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/resource.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "riffle/riffle.hpp"

using namespace riffle;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

long peak_rss_mb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss / 1024;
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << id << ": " << detail << std::endl;
  if (!ok) ++failures;
}

void criterion(int id, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
  }
  report(id, ok, detail.str());
}

const char* kKappa52 =
    "146020943891326775423340146124729913263177343486982212261189487693/"
    "3314356310443124530393681659122442758682178888925184000000000000";

// --- oracle equivalences ---------------------------------------------------

struct EquivalenceTally {
  std::size_t decks = 0;
  std::size_t bad[5] = {0, 0, 0, 0, 0};
  std::string first_bad;
};

void note(EquivalenceTally& t, int which, const std::string& cards) {
  if (t.bad[which]++ == 0 && t.first_bad.empty()) t.first_bad = std::string(1, static_cast<char>('a' + which)) + ":" + cards;
}

void check_deck(const std::string& cards, bool small, EquivalenceTally& t) {
  const Deck d(cards);
  const std::size_t n = d.size();
  const BigInt orbit = d.composition().orbit_size();
  ++t.decks;

  // (a)
  if (kappabar1(d).value != kappabar1_enum(d).value) note(t, 0, cards);

  // (b) mean asc - des over T(D, D') for every D', by a direct pass over S_n
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> asc_des;
  std::vector<int> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
  std::string target(n, ' ');
  do {
    for (std::size_t i = 0; i < n; ++i) target[static_cast<std::size_t>(p[i])] = cards[i];
    std::int64_t s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += p[i] < p[i + 1] ? 1 : -1;
    auto& e = asc_des[target];
    e.first += s;
    e.second += 1;
  } while (std::next_permutation(p.begin(), p.end()));
  for (const auto& [dst, e] : asc_des) {
    Rational expect(e.first * static_cast<std::int64_t>(n), 2 * orbit * e.second);
    expect.canonicalize();
    if (c1(d, d.with_cards(dst)) != expect) {
      note(t, 1, cards + "->" + dst);
      break;
    }
  }

  // (c)
  const auto polys = descent_polynomials_from(d);
  for (std::uint64_t a : {1u, 2u, 3u, 4u, 8u}) {
    Rational total = 0;
    for (const auto& [dst, poly] : polys) total += transition_prob(a, poly);
    if (total != 1) note(t, 2, cards);
  }
  if (!small) return;

  // (d)
  std::map<std::string, std::map<std::string, DescentPolynomial>> from_mid;
  for (const auto& [mid, poly] : polys) from_mid[mid] = descent_polynomials_from(d.with_cards(mid));
  for (auto [a, b] : {std::pair<std::uint64_t, std::uint64_t>{2, 2}, {2, 3}}) {
    std::map<std::string, Rational> composed;
    for (const auto& [mid, poly] : polys) {
      const auto pa = transition_prob(a, poly);
      for (const auto& [end, poly2] : from_mid[mid]) composed[end] += pa * transition_prob(b, poly2);
    }
    for (const auto& [end, poly] : polys)
      if (composed[end] != transition_prob(a * b, poly)) {
        note(t, 3, cards);
        break;
      }
  }

  // (e) both the fixed-source and fixed-target distances
  if (n < 2) return;
  const auto ks = kappa1_enum(d).value;
  const auto kt = kappabar1(d).value;
  const auto polys_to = descent_polynomials_to(d);
  for (std::uint64_t a = 1; a <= 64; ++a) {
    std::map<std::string, Rational> src, tgt;
    for (const auto& [k, poly] : polys) src.emplace(k, transition_prob(a, poly));
    for (const auto& [k, poly] : polys_to) tgt.emplace(k, transition_prob(a, poly));
    const auto bound = error_bound(a, n);
    const long al = static_cast<long>(a);
    if (abs(tv_from_uniform(src, orbit) - ks / al) > bound || abs(tv_from_uniform(tgt, orbit) - kt / al) > bound)
      note(t, 4, cards + " a=" + std::to_string(a));
  }
}

int run_cli(const std::string& args) {
  const int raw = std::system((std::string(RIFFLE_CLI) + " " + args).c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

int main() {
  criterion(1, [](std::ostringstream& out) {
    const auto t0 = Clock::now();
    const auto k = kappa1_distinct(52);
    const double secs = seconds_since(t0);
    const auto text = to_fraction(k);
    const double dec = to_double(k);
    out << "kappa1(52) = " << to_decimal(k, 8) << ", " << secs << " s";
    return text == kKappa52 && std::fabs(dec - 44.0571) < 5e-5 && secs < 1.0;
  });

  criterion(2, [](std::ostringstream& out) {
    const std::vector<std::pair<std::uint64_t, std::string>> row{{16, "1.0000"},  {32, "0.9237"},  {64, "0.6135"},
                                                                 {128, "0.3341"}, {256, "0.1672"}, {512, "0.0854"},
                                                                 {1024, "0.0429"}};
    const auto t0 = Clock::now();
    bool ok = true;
    for (const auto& [a, want] : row) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", to_double(tv_distinct(a, 52)));
      out << buf << " ";
      ok = ok && want == buf;
    }
    const double secs = seconds_since(t0);
    out << "in " << secs << " s";
    return ok && secs < 5.0;
  });

  criterion(3, [](std::ostringstream& out) {
    const auto t0 = Clock::now();
    const Deck poker = parse_pattern("(1234)^5(5)^32");
    const auto p = to_fraction(kappabar1(poker).value);
    const auto p16 = to_fraction(kappabar1(cut(poker, 16)).value);
    const auto ord = kappabar1(make_pattern(DealStyle::ordered, 4, 13)).value;
    const auto cyc = kappabar1(make_pattern(DealStyle::cyclic, 4, 13)).value;
    const auto bf = kappabar1(make_pattern(DealStyle::back_and_forth, 4, 13)).value;
    const double secs = seconds_since(t0);
    const long mb = peak_rss_mb();
    out << "poker " << p << ", cut16 " << p16 << ", bridge ordered " << to_fraction(ord) << "; " << secs << " s, "
        << mb << " MB peak";
    return p == "1041539930128654272599/123600572196960202344" &&
           p16 == "523485619699747366033/126685078454994859800" &&
           to_fraction(ord) == "93574839271687495932003418573/3352796110343049552452340000" && cyc == ord / 13 &&
           bf == ord / 169 && secs < 600 && mb < 4096;
  });

  criterion(4, [](std::ostringstream& out) {
    const std::string csv = "acceptance_cut_sweep.csv";
    if (run_cli("cut-sweep --pattern '(1234)^5(5)^32' --format csv --out " + csv) != 0) {
      out << "cli failed";
      return false;
    }
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0, best_k = 0;
    Rational best;
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string k, exact;
      std::getline(fields, k, ',');
      std::getline(fields, exact, ',');
      const auto q = parse_fraction(exact);
      if (rows == 0 || q < best) {
        best = q;
        best_k = std::stoul(k);
      }
      ++rows;
    }
    const auto direct = sweep_argmin(cut_sweep(parse_pattern("(1234)^5(5)^32")));
    out << rows << " rows in " << csv << ", argmin k = " << best_k << " (library " << direct << ")";
    return rows == 52 && best_k == 16 && direct == 16;
  });

  criterion(5, [](std::ostringstream& out) {
    bool ok = true;
    const auto pz = z_matrix(parse_pattern("(1234)^5(5)^32"));
    for (std::size_t u = 0; u < 5; ++u)
      for (std::size_t v = 0; v < 5; ++v) {
        const std::int64_t base = u == v ? 0 : (v == 4 || u == 4) ? 160 : 5;
        ok = ok && pz(u, v) == (u < v ? base : -base);
      }
    for (auto [style, scale] : {std::pair{DealStyle::ordered, 169}, {DealStyle::cyclic, 13}, {DealStyle::back_and_forth, 1}}) {
      const auto z = z_matrix(make_pattern(style, 4, 13));
      for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t v = 0; v < 4; ++v) ok = ok && z(u, v) == (u < v ? scale : u == v ? 0 : -scale);
    }
    out << "poker 5/160, bridge 169M, 13M, M";
    return ok;
  });

  criterion(6, [](std::ostringstream& out) {
    EquivalenceTally t;
    for (std::size_t n = 1; n <= 7; ++n)
      for (const auto& cards : oracle::canonical_decks(n, 4)) check_deck(cards, n <= 6, t);
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 50; ++i) {
      const std::size_t n = 2 + rng() % 9;
      const std::size_t k = std::min<std::size_t>(n, 2 + rng() % 3);
      check_deck(oracle::random_deck(rng, n, k), n <= 6, t);
    }
    out << t.decks << " decks; mismatches a..e = " << t.bad[0] << "," << t.bad[1] << "," << t.bad[2] << ","
        << t.bad[3] << "," << t.bad[4];
    if (!t.first_bad.empty()) out << " first " << t.first_bad;
    return t.first_bad.empty();
  });

  criterion(7, [](std::ostringstream& out) {
    std::size_t checked = 0, bad = 0;
    for (std::size_t n = 2; n <= 10; ++n)
      for (const auto& cards : oracle::canonical_decks(n, 2)) {
        if (cards.back() != 'A' || cards.find('B') == std::string::npos) continue;
        ++checked;
        if (kappa1_enum(Deck(cards)).value != 0) ++bad;
      }
    out << checked << " two-value decks with matching ends, " << bad << " nonzero";
    return checked > 0 && bad == 0;
  });

  criterion(8, [](std::ostringstream& out) {
    bool exact = true;
    for (std::uint64_t a = 1; a <= 4; ++a)
      for (std::size_t n = 1; n <= 4; ++n) {
        std::map<std::vector<int>, std::uint64_t> hits;
        std::vector<std::uint32_t> word(n, 0);
        while (true) {
          ++hits[permutation_from_word(word, a).images];
          std::size_t i = 0;
          while (i < n && ++word[i] == a) word[i++] = 0;
          if (i == n) break;
        }
        const BigInt total = oracle::ipow(static_cast<unsigned long>(a), n);
        for_each_permutation(n, [&](const std::vector<int>& p) {
          Rational q(BigInt(static_cast<unsigned long>(hits[p])), total);
          q.canonicalize();
          exact = exact && q == shuffle_prob_distinct(a, n, static_cast<std::int64_t>(count_descents(p)));
        });
      }

    // permutations of 3 ranked by images
    std::vector<Rational> probs(27, Rational(0));
    for_each_permutation(3, [&](const std::vector<int>& p) {
      probs[static_cast<std::size_t>(p[0] * 9 + p[1] * 3 + p[2])] =
          shuffle_prob_distinct(2, 3, static_cast<std::int64_t>(count_descents(p)));
    });
    int passed = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      ShuffleSampler s(2, 3, seed);
      std::vector<std::uint64_t> obs(27, 0);
      for (int t = 0; t < 1'000'000; ++t) {
        const auto p = s.sample();
        ++obs[static_cast<std::size_t>(p.images[0] * 9 + p.images[1] * 3 + p.images[2])];
      }
      if (gof_test(obs, probs).p_value > 1e-3) ++passed;
    }
    out << "word enumeration " << (exact ? "exact" : "MISMATCH") << "; " << passed << "/100 seeds pass chi-square";
    return exact && passed >= 99;
  });

  criterion(9, [](std::ostringstream& out) {
    const std::uint64_t a = 8, trials = 4'000'000;
    const std::vector<std::pair<std::string, DealStyle>> styles{
        {"back_and_forth", DealStyle::back_and_forth}, {"cyclic", DealStyle::cyclic}, {"ordered", DealStyle::ordered}};
    std::vector<Rational> exact;
    bool mc_ok = true;
    std::uint64_t stream = 0;
    for (const auto& [name, style] : styles) {
      const Deck d = make_pattern(style, 2, 4);
      exact.push_back(tv_fixed_target(a, d));
      ShuffleSampler s(a, d.size(), 777, stream++);
      SimOptions opts;
      opts.with_exact = false;
      const auto r = estimate_tv(s, TvMode::fixed_target, d, trials, opts);
      const double gap = std::fabs(r.tv_estimate - to_double(exact.back()));
      mc_ok = mc_ok && gap <= 3 * r.standard_error;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s %s exact %.5f mc %.5f (se %.1e); ", name.c_str(), d.cards().c_str(),
                    to_double(exact.back()), r.tv_estimate, r.standard_error);
      out << buf;
    }
    const bool ordered = exact[0] < exact[1] && exact[1] < exact[2];
    out << (ordered ? "order ok" : "order WRONG");
    return ordered && mc_ok;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
