#pragma once

// JSON and CSV renderings of results. Exact values always travel as
// "num/den" strings next to a 12-significant-digit decimal.

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "riffle/asymptotics.hpp"
#include "riffle/deck.hpp"
#include "riffle/numeric.hpp"
#include "riffle/simulate.hpp"

namespace riffle {

using json = nlohmann::ordered_json;

inline json exact_json(const Rational& q) { return json{{"exact", to_fraction(q)}, {"approx", to_decimal(q, 12)}}; }

inline json to_json(const StatMatrix& m, const char* field = "z") {
  json rows = json::array();
  for (std::size_t u = 0; u < m.dim(); ++u) {
    json row = json::array();
    for (std::size_t v = 0; v < m.dim(); ++v) row.push_back(m(u, v));
    rows.push_back(std::move(row));
  }
  json alpha = json::array();
  for (char c : m.alphabet) alpha.push_back(std::string(1, c));
  return json{{"alphabet", alpha}, {field, rows}};
}

inline StatMatrix zmatrix_from_json(const json& j) {
  StatMatrix m;
  for (const auto& s : j.at("alphabet")) {
    const auto str = s.get<std::string>();
    if (str.size() != 1) throw std::invalid_argument("alphabet entries must be single characters");
    m.alphabet.push_back(str[0]);
  }
  const auto& rows = j.at("z");
  if (rows.size() != m.dim()) throw std::invalid_argument("matrix row count does not match alphabet");
  for (const auto& row : rows) {
    if (row.size() != m.dim()) throw std::invalid_argument("matrix is not square");
    for (const auto& x : row) m.entries.push_back(x.get<std::int64_t>());
  }
  return m;
}

inline json to_json(const KappaResult& k) {
  return json{{"kappa", to_fraction(k.value)},
              {"approx", to_decimal(k.value, 12)},
              {"N", k.orbit_size.get_str()},
              {"scale_L", k.scale},
              {"deck", k.context}};
}

inline json to_json(const LatticePath& p) {
  return json{{"u", std::string(1, p.u)},         {"v", std::string(1, p.v)},
              {"steps", p.steps},                 {"area_below", p.area_below},
              {"area_above", p.area_above},       {"difference", p.difference()}};
}

inline json to_json(const SimReport& r) {
  json j{{"trials", r.trials},
         {"a", r.a},
         {"mode", to_string(r.mode)},
         {"tv_estimate", r.tv_estimate},
         {"bias_bound", r.bias_bound},
         {"chi2", nullptr},
         {"p", nullptr},
         {"seed", r.seed},
         {"deck", r.deck},
         {"N", r.orbit_size.get_str()},
         {"standard_error", r.standard_error}};
  if (r.gof) {
    j["chi2"] = r.gof->statistic;
    j["p"] = r.gof->p_value;
    j["dof"] = r.gof->dof;
  }
  if (r.exact_tv) j["exact_tv"] = exact_json(*r.exact_tv);
  return j;
}

/// One CSV row; fields are written verbatim (none of ours contain commas).
inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace riffle
