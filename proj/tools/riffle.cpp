// riffle: command-line front end for the riffle library.
//
// Exit codes: 0 ok, 1 usage error, 2 refused by an enumeration budget,
// 3 internal error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "riffle/riffle.hpp"
#include "riffle/shuffle_range.hpp"

namespace {

using riffle::json;

enum ExitCode { kOk = 0, kUsage = 1, kRefused = 2, kInternal = 3 };

struct Common {
  std::string format = "json";
  std::string out_path;
  std::uint64_t budget = 10'000'000;
  std::size_t max_deck_size = 12;
  std::string alphabet;

  riffle::Budget make_budget() const {
    riffle::Budget b;
    b.max_orbit = budget;
    b.max_deck_size = max_deck_size;
    return b;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::invalid_argument("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, Common& c, bool with_format = true) {
  if (with_format) cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out_path, "Write output to a file instead of standard output");
  cmd->add_option("--budget", c.budget, "Largest orbit size enumerated exhaustively");
  cmd->add_option("--max-deck-size", c.max_deck_size, "Largest deck scanned over all permutations");
  cmd->add_option("--alphabet", c.alphabet, "Explicit value order (default: first appearance)");
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

int run_tv_distinct(const Common& c, std::uint64_t n, const std::string& range, bool first_order) {
  const auto as = riffle::parse_shuffle_range(range);
  if (n == 0) throw std::invalid_argument("n must be positive");
  const auto kappa = riffle::kappa1_distinct(n);
  Output o(c.out_path);
  if (c.format == "csv") {
    std::vector<std::string> header{"a", "tv_exact", "tv"};
    if (first_order) header.insert(header.end(), {"kappa_over_a", "error_bound"});
    riffle::write_csv_row(o.stream(), header);
  }
  json rows = json::array();
  for (auto a : as) {
    const auto tv = riffle::tv_distinct(a, n);
    if (c.format == "csv") {
      std::vector<std::string> row{std::to_string(a), riffle::to_fraction(tv), riffle::to_decimal(tv, 12)};
      if (first_order) {
        row.push_back(riffle::to_decimal(kappa / a, 12));
        row.push_back(n >= 2 ? riffle::to_decimal(riffle::error_bound(a, n), 12) : "");
      }
      riffle::write_csv_row(o.stream(), row);
    } else {
      json r{{"a", a}, {"tv", riffle::exact_json(tv)}};
      if (first_order) {
        r["kappa_over_a"] = riffle::exact_json(kappa / a);
        if (n >= 2) r["error_bound"] = riffle::exact_json(riffle::error_bound(a, n));
      }
      rows.push_back(std::move(r));
    }
  }
  if (c.format == "json") {
    json j{{"n", n}, {"rows", rows}};
    if (first_order) j["kappa1"] = riffle::exact_json(kappa);
    print_json(o.stream(), j);
  }
  return kOk;
}

int run_kappa(const Common& c, const std::string& source, std::optional<std::uint64_t> distinct,
              const std::string& target) {
  const int given = (source.empty() ? 0 : 1) + (distinct ? 1 : 0) + (target.empty() ? 0 : 1);
  if (given != 1) throw std::invalid_argument("give exactly one of --source, --source-distinct, --target");
  json j;
  if (distinct) {
    const auto k = riffle::kappa1_distinct(*distinct);
    j = json{{"case", "fixed_source_distinct"},
             {"n", *distinct},
             {"kappa", riffle::to_fraction(k)},
             {"approx", riffle::to_decimal(k, 12)},
             {"N", riffle::factorial(*distinct).get_str()},
             {"formula_estimate", riffle::kappa1_approx(*distinct)}};
  } else if (!source.empty()) {
    const auto deck = riffle::parse_pattern(source, c.alphabet);
    j = riffle::to_json(riffle::kappa1_enum(deck, c.make_budget()));
    j["case"] = "fixed_source";
    j["w"] = riffle::to_json(riffle::w_matrix(deck), "w");
  } else {
    const auto deck = riffle::parse_pattern(target, c.alphabet);
    j = riffle::to_json(riffle::kappabar1(deck));
    j["case"] = "fixed_target";
    j["z"] = riffle::to_json(riffle::z_matrix(deck));
  }
  Output o(c.out_path);
  print_json(o.stream(), j);
  return kOk;
}

int run_cut_sweep(const Common& c, const std::string& pattern) {
  const auto deck = riffle::parse_pattern(pattern, c.alphabet);
  const auto sweep = riffle::cut_sweep(deck);
  const auto best = riffle::sweep_argmin(sweep);
  Output o(c.out_path);
  if (c.format == "csv") {
    riffle::write_csv_row(o.stream(), {"k", "kappabar1_exact", "kappabar1", "argmin"});
    for (const auto& e : sweep)
      riffle::write_csv_row(o.stream(), {std::to_string(e.k), riffle::to_fraction(e.kappa.value),
                                         riffle::to_decimal(e.kappa.value, 12), e.k == best ? "1" : "0"});
  } else {
    json rows = json::array();
    for (const auto& e : sweep) {
      json r = riffle::to_json(e.kappa);
      r["k"] = e.k;
      rows.push_back(std::move(r));
    }
    print_json(o.stream(), json{{"pattern", deck.cards()}, {"argmin", best}, {"rows", rows}});
  }
  return kOk;
}

int run_simulate(const Common& c, const std::string& mode, const std::string& pattern, std::uint64_t a,
                 std::uint64_t trials, std::uint64_t seed) {
  const auto deck = riffle::parse_pattern(pattern, c.alphabet);
  riffle::ShuffleSampler sampler(a, deck.size(), seed);
  riffle::SimOptions opts;
  opts.budget.max_deck_size = std::min<std::size_t>(c.max_deck_size, 10);
  const auto m = mode == "fixed_source" ? riffle::TvMode::fixed_source : riffle::TvMode::fixed_target;
  const auto report = riffle::estimate_tv(sampler, m, deck, trials, opts);
  Output o(c.out_path);
  print_json(o.stream(), riffle::to_json(report));
  return kOk;
}

int run_lattice(const Common& c, const std::string& pattern, const std::string& u, const std::string& v) {
  if (u.size() != 1 || v.size() != 1) throw std::invalid_argument("-u and -v take single card values");
  const auto deck = riffle::parse_pattern(pattern, c.alphabet);
  Output o(c.out_path);
  print_json(o.stream(), riffle::to_json(riffle::lattice_path(deck, u[0], v[0])));
  return kOk;
}

int run_eulerian(const Common& c, std::uint64_t n) {
  const auto& row = riffle::eulerian_row(n);
  Output o(c.out_path);
  if (c.format == "csv") {
    riffle::write_csv_row(o.stream(), {"d", "eulerian"});
    for (std::size_t d = 0; d < row.size(); ++d) riffle::write_csv_row(o.stream(), {std::to_string(d), row[d].get_str()});
  } else {
    json values = json::array();
    for (const auto& x : row) values.push_back(x.get_str());
    print_json(o.stream(), json{{"n", n}, {"eulerian", values}});
  }
  return kOk;
}

int run_transition(const Common& c, const std::string& range, const std::string& source, const std::string& target) {
  const auto as = riffle::parse_shuffle_range(range);
  const auto dst = riffle::parse_pattern(target, c.alphabet);
  const auto src = dst.with_cards(riffle::parse_pattern(source).cards());
  const auto poly = riffle::descent_polynomial(src, dst, c.make_budget());
  json coeffs = json::array();
  for (const auto& b : poly.coefficients) coeffs.push_back(b.get_str());
  json rows = json::array();
  for (auto a : as) rows.push_back(json{{"a", a}, {"probability", riffle::exact_json(riffle::transition_prob(a, poly))}});
  Output o(c.out_path);
  print_json(o.stream(), json{{"source", src.cards()},
                              {"target", dst.cards()},
                              {"descent_polynomial", coeffs},
                              {"c1", riffle::exact_json(riffle::c1(src, dst))},
                              {"N", dst.composition().orbit_size().get_str()},
                              {"rows", rows}});
  return kOk;
}

int run_zmatrix(const Common& c, const std::string& pattern) {
  const auto deck = riffle::parse_pattern(pattern, c.alphabet);
  json j = riffle::to_json(riffle::z_matrix(deck));
  j["w"] = riffle::to_json(riffle::w_matrix(deck), "w")["w"];
  Output o(c.out_path);
  print_json(o.stream(), j);
  return kOk;
}

int run_pattern(const Common& c, const std::string& style, std::size_t players, std::size_t hand, std::size_t k) {
  const auto s = style == "ordered"  ? riffle::DealStyle::ordered
                 : style == "cyclic" ? riffle::DealStyle::cyclic
                                     : riffle::DealStyle::back_and_forth;
  auto deck = riffle::make_pattern(s, players, hand);
  if (k) deck = riffle::cut(deck, k);
  Output o(c.out_path);
  o.stream() << deck.cards() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomness of shuffled and dealt card games under the a-shuffle model"};
  app.require_subcommand(1, 1);
  Common common;

  std::uint64_t n = 52;
  std::string range = "1";
  bool first_order = false;
  auto* tv = app.add_subcommand("tv-distinct", "Exact variation distance for n distinct cards");
  tv->add_option("-n", n, "Deck size")->check(CLI::PositiveNumber);
  tv->add_option("-a,--shuffle", range, "Shuffle sizes, e.g. 1024, 1..8, 2^4..2^10")->required();
  tv->add_flag("--first-order", first_order, "Add kappa1/a and the error bound");
  add_common(tv, common);

  std::string source, target, pattern;
  std::optional<std::uint64_t> distinct;
  auto* kappa = app.add_subcommand("kappa", "First-order constant kappa1 (source) or kappabar1 (target)");
  kappa->add_option("--source", source, "Source deck pattern (fixed source kappa1)");
  kappa->add_option("--source-distinct", distinct, "kappa1 of n distinct cards");
  kappa->add_option("--target", target, "Dealing pattern (fixed target kappabar1)");
  add_common(kappa, common, false);

  auto* sweep = app.add_subcommand("cut-sweep", "kappabar1 for every cut of a dealing pattern");
  sweep->add_option("--pattern", pattern, "Dealing pattern")->required();
  add_common(sweep, common);

  std::string mode = "fixed_target";
  std::uint64_t a = 2, trials = 100'000, seed = 1;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo variation distance on a small orbit");
  sim->add_option("--mode", mode, "fixed_source or fixed_target")
      ->check(CLI::IsMember({"fixed_source", "fixed_target"}));
  sim->add_option("--pattern", pattern, "Deck (fixed source) or dealing pattern (fixed target)")->required();
  sim->add_option("-a,--shuffle", a, "Shuffle size a")->check(CLI::PositiveNumber);
  sim->add_option("--trials", trials, "Number of shuffles")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "RNG seed");
  add_common(sim, common, false);

  std::string u, v;
  auto* lattice = app.add_subcommand("lattice", "North-east lattice path of two hands");
  lattice->add_option("--pattern", pattern, "Dealing pattern")->required();
  lattice->add_option("-u", u, "Value drawn as north steps")->required();
  lattice->add_option("-v", v, "Value drawn as east steps")->required();
  add_common(lattice, common, false);

  auto* euler = app.add_subcommand("eulerian", "Row n of the Eulerian triangle");
  euler->add_option("-n", n, "Row")->check(CLI::PositiveNumber);
  add_common(euler, common);

  auto* trans = app.add_subcommand("transition", "Exact P_a(source -> target)");
  trans->add_option("--source", source, "Source deck")->required();
  trans->add_option("--target", target, "Target deck")->required();
  trans->add_option("-a,--shuffle", range, "Shuffle sizes")->required();
  add_common(trans, common, false);

  auto* zm = app.add_subcommand("zmatrix", "Pair (Z) and digraph (W) matrices of a deck");
  zm->add_option("--pattern", pattern, "Deck or dealing pattern")->required();
  add_common(zm, common, false);

  std::string style = "cyclic";
  std::size_t players = 4, hand = 13, cut_at = 0;
  auto* pat = app.add_subcommand("pattern", "Print a standard dealing pattern");
  pat->add_option("--style", style, "ordered, cyclic or back_and_forth")
      ->check(CLI::IsMember({"ordered", "cyclic", "back_and_forth"}));
  pat->add_option("--players", players, "Number of hands")->check(CLI::PositiveNumber);
  pat->add_option("--hand", hand, "Cards per hand")->check(CLI::PositiveNumber);
  pat->add_option("--cut", cut_at, "Rotate by this cut position");
  add_common(pat, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*tv) return run_tv_distinct(common, n, range, first_order);
    if (*kappa) return run_kappa(common, source, distinct, target);
    if (*sweep) return run_cut_sweep(common, pattern);
    if (*sim) return run_simulate(common, mode, pattern, a, trials, seed);
    if (*lattice) return run_lattice(common, pattern, u, v);
    if (*euler) return run_eulerian(common, n);
    if (*trans) return run_transition(common, range, source, target);
    if (*zm) return run_zmatrix(common, pattern);
    if (*pat) return run_pattern(common, style, players, hand, cut_at);
  } catch (const riffle::budget_exceeded& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kRefused;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
