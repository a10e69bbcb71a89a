#pragma once

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "interp_scales/boyd.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/kfunc.hpp"
#include "interp_scales/operators.hpp"
#include "interp_scales/verify.hpp"

namespace interp_scales {

using Json = nlohmann::ordered_json;

/// Non-finite doubles become the strings "inf", "-inf", "nan".
inline Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline Json json_numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double e : v) a.push_back(json_number(e));
  return a;
}

inline Json to_json(const EquivalenceReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  Json j;
  j["theorem"] = r.theorem;
  j["params"] = params;
  j["n_samples"] = r.n_samples;
  j["N"] = r.n;
  j["N2"] = r.n2;
  j["ratio_min"] = json_number(r.ratio_min);
  j["ratio_max"] = json_number(r.ratio_max);
  j["spread"] = json_number(r.spread);
  j["ratio_min_N2"] = json_number(r.ratio_min_n2);
  j["ratio_max_N2"] = json_number(r.ratio_max_n2);
  j["spread_N2"] = json_number(r.spread_n2);
  j["spread_change"] = json_number(r.spread_change);
  j["C_emp"] = json_number(r.c_emp);
  j["rank_correlation"] = json_number(r.rank_correlation);
  j["max_tail_bound"] = json_number(r.max_tail_bound);
  j["pass"] = r.pass;
  j["failures"] = r.failures;
  j["reasons"] = r.reasons;
  j["warnings"] = r.warnings;
  j["ratios"] = json_numbers(r.ratios);
  j["ratios_N2"] = json_numbers(r.ratios_n2);
  return j;
}

inline Json to_json(const EmbeddingReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  Json j;
  j["theorem"] = "embed";
  j["params"] = params;
  j["n_samples"] = r.n_samples;
  j["N"] = r.n;
  j["N2"] = r.n2;
  j["sum_ratio_max"] = json_number(r.sum_ratio_max);
  j["sum_ratio_max_N2"] = json_number(r.sum_ratio_max_n2);
  j["intersection_ratio_max"] = json_number(r.inter_ratio_max);
  j["intersection_ratio_max_N2"] = json_number(r.inter_ratio_max_n2);
  j["pass"] = r.pass;
  j["failures"] = r.failures;
  j["reasons"] = r.reasons;
  j["warnings"] = r.warnings;
  return j;
}

inline Json to_json(const BoydIndices& idx) {
  return Json{{"upper", json_number(idx.upper)},
              {"lower", json_number(idx.lower)},
              {"probe_t_large", idx.probe_t_large},
              {"probe_t_small", idx.probe_t_small},
              {"exact", idx.exact}};
}

inline Json to_json(const WeightValidation& v) {
  Json probes = Json::array();
  for (const auto& p : v.m_probes) {
    probes.push_back(Json{{"p", p.p},
                          {"M", json_number(p.value)},
                          {"M_half", json_number(p.value_half)},
                          {"finite", p.finite}});
  }
  return Json{{"n", v.n},
              {"monotone_normalized", v.monotone_normalized},
              {"tends_to_zero", v.tends_to_zero},
              {"decay_ratio", json_number(v.decay_ratio)},
              {"divergent_sum", v.divergent_sum},
              {"tail_increment", json_number(v.tail_increment)},
              {"m_probes", probes},
              {"m_finite", v.m_finite},
              {"definition_pass", v.definition_pass()},
              {"limit_t", json_numbers(v.limit_t)},
              {"limit_values", json_numbers(v.limit_values)},
              {"limit_slope", json_number(v.limit_slope)},
              {"limit_condition", v.limit_condition}};
}

inline Json to_json(const InterpolationResult& r) {
  return Json{{"value", json_number(r.value)},
              {"tail_bound", json_number(r.tail_bound)},
              {"panels", r.panels},
              {"tail_estimate", json_number(r.tail_estimate)},
              {"discretization", json_number(r.discretization)},
              {"half_window_log2", r.half_window_log2},
              {"warnings", r.warnings}};
}

/// t,K,method rows with a header.
inline std::string to_csv(const KCurve& c) {
  std::ostringstream os;
  os.precision(17);
  os << "t,K,method\n";
  for (std::size_t i = 0; i < c.t.size(); ++i) os << c.t[i] << ',' << c.k[i] << ',' << to_string(c.method) << '\n';
  return os.str();
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// A sequence file holds a JSON array of numbers, or whitespace/comma
/// separated numbers.
inline std::vector<double> parse_sequence_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<double> v;
  if (first != std::string::npos && text[first] == '[') {
    const auto j = Json::parse(text);
    if (!j.is_array()) throw InvalidInput("sequence JSON must be an array");
    for (const auto& e : j) {
      if (!e.is_number()) throw InvalidInput("sequence JSON must contain numbers only");
      v.push_back(e.get<double>());
    }
    return v;
  }
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream is(cleaned);
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size()) throw InvalidInput("sequence file: '" + tok + "' is not a number");
    v.push_back(d);
  }
  return v;
}

/// {"rows": r, "cols": c, "entries": [...]} in row-major order, or a JSON
/// array of equal-length rows.
inline DenseMatrix parse_matrix_json(const std::string& text) {
  const auto j = Json::parse(text);
  if (j.is_object()) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    return DenseMatrix(rows, cols, j.at("entries").get<std::vector<double>>());
  }
  if (!j.is_array() || j.empty() || !j.front().is_array()) throw InvalidInput("matrix JSON: expected rows");
  const std::size_t cols = j.front().size();
  std::vector<double> e;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw InvalidInput("matrix JSON: ragged rows");
    for (const auto& x : row) e.push_back(x.get<double>());
  }
  return DenseMatrix(j.size(), cols, std::move(e));
}

}  // namespace interp_scales
