#pragma once

// Benchmark registry and the `oham-problem v1` configuration format.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oham/bvp.hpp"
#include "oham/error.hpp"
#include "oham/expr.hpp"
#include "oham/kernel.hpp"

namespace oham {

enum class ProblemId { P1_DoublySingular, P2_ThermalExplosion, P3_HumanHead, P4_OxygenDiffusion, P5_PerturbedLaneEmden };

inline const char* problem_tag(ProblemId id) {
  static constexpr std::array<const char*, 5> tags{"P1", "P2", "P3", "P4", "P5"};
  return tags[static_cast<std::size_t>(id)];
}

inline const char* problem_title(ProblemId id) {
  static constexpr std::array<const char*, 5> titles{"doubly singular Dirichlet problem", "thermal explosion",
                                                     "heat sources in the human head",
                                                     "oxygen diffusion in a spherical cell",
                                                     "perturbed second-kind Lane-Emden equation"};
  return titles[static_cast<std::size_t>(id)];
}

inline ProblemId parse_problem_id(std::string_view s) {
  for (int i = 0; i < 5; ++i) {
    const auto id = static_cast<ProblemId>(i);
    const std::string tag = problem_tag(id);
    if (s.size() == 2 && std::toupper(static_cast<unsigned char>(s[0])) == 'P' && s[1] == tag[1]) return id;
  }
  throw Error(Errc::invalid_argument, "unknown problem id '" + std::string(s) + "' (expected P1..P5)");
}

struct PublishedC0 {
  int order;
  double c0;
};

struct TableRow {
  int table;
  double x;
  std::string column;  // e.g. "phi10", "E10", "e5"
  double value;
};

/// One column group of a published table: a problem instance and its
/// columns sampled at x = 0.1, ..., 0.9.
struct PublishedTableCase {
  int table;
  ProblemId id;
  ParameterMap parameters;
  std::map<std::string, std::array<double, 9>> columns;
};

// Column key: e<M>/E<M> are the absolute error (table 1) or differential
// residual (other tables) at order M with c0 = -1 and with the optimal c0;
// psi10/phi10 are the corresponding solutions at order 10.
inline const std::vector<PublishedTableCase>& published_tables() {
  static const std::vector<PublishedTableCase> cases{
      {1, ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}},
       {{"e5", {3.16E-08, 4.70E-08, 6.15E-08, 7.62E-08, 9.11E-08, 1.04E-07, 1.12E-07, 1.08E-07, 7.72E-08}},
        {"E5", {2.53E-08, 3.44E-08, 3.86E-08, 3.94E-08, 3.73E-08, 3.28E-08, 2.63E-08, 1.81E-08, 8.07E-09}},
        {"e10", {5.38E-13, 8.19E-13, 1.07E-12, 1.32E-12, 1.54E-12, 1.71E-12, 1.74E-12, 1.53E-12, 9.51E-13}},
        {"E10", {4.28E-14, 5.24E-14, 5.55E-14, 5.70E-14, 5.92E-14, 6.17E-14, 6.21E-14, 5.24E-14, 2.90E-14}},
        {"psi10", {-1.410986974, -1.435084525, -1.458615023, -1.481604541, -1.504077397, -1.526056303, -1.547562509, -1.568615918, -1.589235205}},
        {"phi10", {-1.410986974, -1.435084525, -1.458615023, -1.481604541, -1.504077397, -1.526056303, -1.547562509, -1.568615918, -1.589235205}}}},
      {2, ProblemId::P2_ThermalExplosion, {{"n", 1.5}, {"sigma", 1.0}},
       {{"e5", {5.20E-04, 4.88E-04, 4.38E-04, 3.74E-04, 3.02E-04, 2.27E-04, 1.56E-04, 9.25E-05, 3.98E-05}},
        {"E5", {7.56E-06, 7.15E-06, 6.52E-06, 5.72E-06, 4.79E-06, 3.66E-06, 2.08E-06, 5.69E-07, 5.62E-06}},
        {"e10", {3.75E-07, 3.50E-07, 3.10E-07, 2.61E-07, 2.07E-07, 1.53E-07, 1.03E-07, 5.95E-08, 2.50E-08}},
        {"E10", {1.22E-13, 4.96E-12, 1.34E-11, 2.56E-11, 4.03E-11, 5.18E-11, 4.09E-11, 4.75E-11, 3.58E-10}},
        {"psi10", {0.859202, 0.863188, 0.869870, 0.879303, 0.891566, 0.906766, 0.925033, 0.946527, 0.971441}},
        {"phi10", {0.859202, 0.863188, 0.869870, 0.879303, 0.891566, 0.906766, 0.925033, 0.946527, 0.971441}}}},
      {3, ProblemId::P2_ThermalExplosion, {{"n", 2.0}, {"sigma", 1.5}},
       {{"e5", {3.69E-01, 3.46E-01, 3.10E-01, 2.64E-01, 2.13E-01, 1.60E-01, 1.10E-01, 6.53E-02, 2.85E-02}},
        {"E5", {1.21E-03, 1.14E-03, 1.03E-03, 8.79E-04, 6.84E-04, 4.01E-04, 7.74E-05, 9.87E-04, 2.82E-03}},
        {"e10", {1.34E-01, 1.25E-01, 1.10E-01, 9.13E-02, 7.16E-02, 5.24E-02, 3.50E-02, 2.03E-02, 8.71E-03}},
        {"E10", {9.57E-08, 1.88E-07, 3.33E-07, 5.10E-07, 6.56E-07, 5.93E-07, 1.88E-07, 3.12E-06, 1.21E-05}},
        {"psi10", {0.759370, 0.765211, 0.775144, 0.789464, 0.808584, 0.833035, 0.863480, 0.900738, 0.945823}},
        {"phi10", {0.750609, 0.756965, 0.767704, 0.783048, 0.803324, 0.828980, 0.860603, 0.898953, 0.945003}}}},
      {4, ProblemId::P2_ThermalExplosion, {{"n", 2.0}, {"sigma", 2.0}},
       {{"e5", {0.083, 0.316, 0.650, 1.013, 1.317, 1.482, 1.444, 1.176, 0.684}},
        {"E5", {1.63E-04, 6.14E-04, 1.23E-03, 1.87E-03, 2.30E-03, 2.17E-03, 6.53E-04, 4.45E-03, 1.89E-02}},
        {"e10", {1.140, 4.160, 7.990, 11.37, 13.26, 13.20, 11.30, 8.071, 4.130}},
        {"E10", {9.69E-07, 4.10E-06, 9.92E-06, 1.85E-05, 2.67E-05, 1.83E-05, 6.65E-05, 4.25E-04, 1.67E-04}},
        {"psi10", {4.265570, 4.060708, 3.741832, 3.339042, 2.887879, 2.424517, 1.981583, 1.585305, 1.254310}},
        {"phi10", {0.641604, 0.649873, 0.663942, 0.684262, 0.711509, 0.746636, 0.790944, 0.846200, 0.914796}}}},
      {5, ProblemId::P3_HumanHead, {{"a2", 1.0}, {"b2", 1.0}, {"g2", 0.0}, {"delta", 1.0}},
       {{"e5", {1.18E-01, 1.15E-01, 1.12E-01, 1.07E-01, 1.01E-01, 9.44E-02, 8.68E-02, 7.87E-02, 7.04E-02}},
        {"E5", {2.05E-04, 1.87E-04, 1.57E-04, 1.15E-04, 6.13E-05, 4.61E-06, 8.39E-05, 1.79E-04, 2.94E-04}},
        {"e10", {8.05E-02, 7.87E-02, 7.58E-02, 7.19E-02, 6.73E-02, 6.20E-02, 5.63E-02, 5.05E-02, 4.46E-02}},
        {"E10", {2.41E-06, 2.40E-06, 2.38E-06, 2.37E-06, 2.36E-06, 2.38E-06, 2.44E-06, 2.57E-06, 2.79E-06}},
        {"psi10", {0.3442719, 0.3411278, 0.3358608, 0.3284310, 0.3187835, 0.3068490, 0.2925442, 0.2757729, 0.2564260}},
        {"phi10", {0.3663613, 0.3628931, 0.3570965, 0.3489474, 0.3384112, 0.3254426, 0.3099852, 0.2919703, 0.2713162}}}},
      {6, ProblemId::P3_HumanHead, {{"a2", 2.0}, {"b2", 1.0}, {"g2", 0.0}, {"delta", 1.0}},
       {{"e5", {1.35E-02, 1.31E-02, 1.24E-02, 1.14E-02, 1.03E-02, 9.08E-03, 7.77E-03, 6.46E-03, 5.21E-03}},
        {"E5", {6.11E-05, 5.54E-05, 4.62E-05, 3.37E-05, 1.82E-05, 2.51E-07, 2.23E-05, 4.92E-05, 8.36E-05}},
        {"e10", {8.11E-04, 7.77E-04, 7.25E-04, 6.58E-04, 5.80E-04, 4.98E-04, 4.16E-04, 3.38E-04, 2.68E-04}},
        {"E10", {9.12E-08, 8.83E-08, 8.39E-08, 7.87E-08, 7.35E-08, 6.93E-08, 6.72E-08, 6.87E-08, 7.65E-08}},
        {"psi10", {0.2686241, 0.2648035, 0.2584162, 0.2494321, 0.2378088, 0.2234908, 0.2064084, 0.1864771, 0.1635958}},
        {"phi10", {0.2687568, 0.2649327, 0.2585397, 0.2495481, 0.2379158, 0.2235876, 0.2064944, 0.1865520, 0.1636596}}}},
      {7, ProblemId::P4_OxygenDiffusion, {{"n", 0.76129}, {"k", 0.03119}},
       {{"e5", {2.80E-06, 2.49E-06, 2.03E-06, 1.50E-06, 9.93E-07, 5.66E-07, 2.63E-07, 8.70E-08, 1.13E-08}},
        {"E5", {7.95E-07, 6.94E-07, 5.54E-07, 4.07E-07, 2.83E-07, 2.01E-07, 1.59E-07, 1.49E-07, 1.52E-07}},
        {"e10", {1.95E-10, 1.50E-10, 9.42E-11, 4.56E-11, 1.45E-11, 6.60E-13, 2.52E-12, 1.77E-12, 7.45E-13}},
        {"E10", {1.04E-10, 7.76E-11, 4.61E-11, 2.00E-11, 4.59E-12, 1.23E-12, 1.82E-12, 9.98E-13, 4.01E-13}},
        {"psi10", {0.829706092, 0.833374734, 0.839489914, 0.848052785, 0.859064927, 0.872528320, 0.888445306, 0.906818548, 0.927650988}},
        {"phi10", {0.829706092, 0.833374734, 0.839489914, 0.848052785, 0.859064927, 0.872528320, 0.888445306, 0.906818548, 0.927650988}}}},
      {8, ProblemId::P5_PerturbedLaneEmden, {{"alpha", 1.0}, {"epsilon", 5.0}, {"delta", 1.0}},
       {{"e10", {96.820, 200.650, 312.307, 423.542, 519.051, 582.390, 602.770, 579.289, 520.645}},
        {"E10", {3.79E-04, 4.41E-04, 2.20E-05, 1.03E-03, 2.45E-03, 4.01E-03, 5.44E-03, 6.62E-03, 7.53E-03}}}},
      {8, ProblemId::P5_PerturbedLaneEmden, {{"alpha", 1.0}, {"epsilon", 10.0}, {"delta", 1.0}},
       {{"e10", {1190.90, 2334.05, 3295.97, 3858.23, 3823.73, 3159.91, 2068.78, 914.41, 40.79}},
        {"E10", {3.95E-05, 2.93E-04, 7.10E-04, 8.85E-04, 2.47E-04, 1.51E-03, 4.10E-03, 6.73E-03, 8.66E-03}}}},
      {8, ProblemId::P5_PerturbedLaneEmden, {{"alpha", 1.0}, {"epsilon", 15.0}, {"delta", 1.0}},
       {{"e10", {173751.94, 299967.18, 350180.75, 324708.56, 248739.93, 157883.64, 81587.42, 33136.89, 10098.14}},
        {"E10", {1.73E-03, 1.11E-03, 2.71E-03, 8.77E-03, 1.52E-02, 2.08E-02, 2.52E-02, 2.90E-02, 3.26E-02}}}},
      {9, ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 5.0}, {"delta", 1.0}},
       {{"e10", {380.762, 332.801, 264.086, 187.844, 116.761, 59.804, 20.680, 1.774, 11.741}},
        {"E10", {2.28E-03, 1.83E-03, 1.09E-03, 1.19E-04, 9.99E-04, 2.13E-03, 3.14E-03, 3.97E-03, 4.57E-03}}}},
      {9, ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 10.0}, {"delta", 1.0}},
       {{"e10", {1279.93, 1129.84, 917.57, 686.12, 474.09, 305.58, 187.06, 111.44, 65.80}},
        {"E10", {1.06E-03, 4.31E-04, 3.92E-04, 1.18E-03, 1.77E-03, 2.12E-03, 2.24E-03, 2.21E-03, 2.08E-03}}}},
      {9, ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 15.0}, {"delta", 1.0}},
       {{"e10", {29880.52, 25360.17, 19118.32, 12594.80, 7033.77, 3128.11, 928.97, 18.88, 178.08}},
        {"E10", {4.02E-03, 6.66E-04, 3.28E-03, 6.41E-03, 8.11E-03, 8.61E-03, 8.56E-03, 8.44E-03, 8.39E-03}}}},
  };
  return cases;
}

struct BenchmarkProblem {
  ProblemId id;
  ParameterMap parameters;
  SingularBVP bvp;
  std::optional<Expr> exact_solution;
  std::vector<PublishedC0> paper_c0;
  std::vector<TableRow> paper_table_rows;
};

namespace detail {

struct ProblemTemplate {
  std::vector<std::string> required;
  ParameterMap defaults;
};

inline const ProblemTemplate& problem_template(ProblemId id) {
  static const std::array<ProblemTemplate, 5> t{{
      {{"alpha", "beta"}, {}},
      {{"n", "sigma"}, {}},
      {{"a2", "b2", "g2"}, {{"delta", 1.0}}},
      {{}, {{"n", 0.76129}, {"k", 0.03119}}},
      {{"alpha", "epsilon"}, {{"delta", 1.0}}},
  }};
  return t[static_cast<std::size_t>(id)];
}

inline bool same_parameters(const ParameterMap& a, const ParameterMap& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || std::fabs(it->second - v) > 1e-12 * std::max(1.0, std::fabs(v))) return false;
  }
  return true;
}

inline std::vector<PublishedC0> published_c0(ProblemId id, const ParameterMap& p) {
  struct Entry {
    ProblemId id;
    ParameterMap params;
    std::vector<PublishedC0> c0;
  };
  static const std::vector<Entry> table{
      {ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}}, {{5, -0.970001}, {10, -0.970011}}},
      {ProblemId::P2_ThermalExplosion, {{"n", 1.5}, {"sigma", 1.0}}, {{5, -0.8929193}, {10, -0.8712345}}},
      {ProblemId::P2_ThermalExplosion, {{"n", 2.0}, {"sigma", 1.5}}, {{5, -0.6890655}, {10, -0.6666666}}},
      {ProblemId::P2_ThermalExplosion, {{"n", 2.0}, {"sigma", 2.0}}, {{5, -0.5723102}, {10, -0.4809289}}},
      {ProblemId::P3_HumanHead, {{"a2", 1.0}, {"b2", 1.0}, {"g2", 0.0}, {"delta", 1.0}}, {{5, -0.6842013}, {10, -0.6666463}}},
      {ProblemId::P3_HumanHead, {{"a2", 2.0}, {"b2", 1.0}, {"g2", 0.0}, {"delta", 1.0}}, {{5, -0.7759493}, {10, -0.7701234}}},
      {ProblemId::P4_OxygenDiffusion, {{"n", 0.76129}, {"k", 0.03119}}, {{5, -1.045949}, {10, -1.010201}}},
      {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 1.0}, {"epsilon", 5.0}, {"delta", 1.0}}, {{10, -0.432512}}},
      {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 1.0}, {"epsilon", 10.0}, {"delta", 1.0}}, {{10, -0.381111}}},
      {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 1.0}, {"epsilon", 15.0}, {"delta", 1.0}}, {{10, -0.284943}}},
      {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 5.0}, {"delta", 1.0}}, {{10, -0.608235}}},
      {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 10.0}, {"delta", 1.0}}, {{10, -0.471209}}},
      {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 15.0}, {"delta", 1.0}}, {{10, -0.381567}}},
  };
  for (const Entry& e : table)
    if (e.id == id && same_parameters(e.params, p)) return e.c0;
  return {};
}

}  // namespace detail

/// The problem statement text of each benchmark in config form.
inline std::string benchmark_config(ProblemId id, const ParameterMap& params);

/// Configuration the CLI and tests can round-trip; see load_problem.
struct ProblemDefinition {
  SingularBVP bvp;
  ParameterMap parameters;
  std::optional<Expr> exact_solution;
  std::vector<std::string> warnings;
};

namespace detail {

struct ConfigEntry {
  std::string value;
  int line;
  int column;
};

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace detail

/// Parses an `oham-problem v1` file:
///
///   oham-problem v1
///   [parameters]     name = expression (may use earlier parameters)
///   [coefficients]   p_exponent, q_exponent, optional p_smooth / q_smooth in x
///   [bc]             family = dirichlet-robin | neumann-robin,
///                    delta1 (dirichlet only), alpha, beta, gamma
///   [nonlinearity]   f = expression in x, y; sign = minus | plus;
///                    optional initial_guess = expression in x
///   [exact]          optional y = expression in x
///
/// Blank lines and lines starting with '#' are ignored.
inline ProblemDefinition load_problem_definition(std::string_view text) {
  using detail::ConfigEntry;
  static const std::map<std::string, std::set<std::string>> allowed{
      {"coefficients", {"p_exponent", "q_exponent", "p_smooth", "q_smooth"}},
      {"bc", {"family", "delta1", "alpha", "beta", "gamma"}},
      {"nonlinearity", {"f", "sign", "initial_guess"}},
      {"exact", {"y"}},
  };
  std::map<std::string, std::map<std::string, ConfigEntry>> sections;
  std::vector<std::pair<std::string, ConfigEntry>> parameters;
  std::string section;
  bool header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "oham-problem v1") throw ParseError(line_no, 1, "expected header 'oham-problem v1'");
      header = true;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, static_cast<int>(line.size()), "expected ']'");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "parameters" && !allowed.count(section))
        throw ParseError(line_no, 2, "unknown section '" + section + "'");
      if (section != "parameters" && sections.count(section))
        throw ParseError(line_no, 2, "duplicate section '" + section + "'");
      sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, 1, "expected 'key = value'");
    if (section.empty()) throw ParseError(line_no, 1, "key outside of a section");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    const std::size_t vstart = raw.find_first_not_of(" \t", raw.find('=') + 1);
    const int value_col = static_cast<int>(vstart == std::string_view::npos ? raw.size() : vstart) + 1;
    if (key.empty()) throw ParseError(line_no, 1, "empty key");
    if (value.empty()) throw ParseError(line_no, value_col, "empty value for '" + key + "'");
    if (section == "parameters") {
      for (const auto& [k, e] : parameters)
        if (k == key) throw ParseError(line_no, 1, "duplicate parameter '" + key + "'");
      if (key == "x" || key == "y" || key == "pi" || key == "exp" || key == "log" || key == "sqrt")
        throw ParseError(line_no, 1, "reserved name '" + key + "'");
      parameters.emplace_back(key, ConfigEntry{value, line_no, value_col});
      continue;
    }
    if (!allowed.at(section).count(key)) throw ParseError(line_no, 1, "unknown key '" + key + "' in [" + section + "]");
    if (sections[section].count(key)) throw ParseError(line_no, 1, "duplicate key '" + key + "'");
    sections[section][key] = ConfigEntry{value, line_no, value_col};
  }
  if (!header) throw ParseError(1, 1, "expected header 'oham-problem v1'");

  ProblemDefinition def;
  auto expr_at = [&](const ConfigEntry& e) {
    try {
      return parse_expr(e.value, def.parameters, e.line);
    } catch (const ParseError& pe) {
      throw ParseError(e.line, e.column + pe.column() - 1, pe.detail());
    }
  };
  auto constant_at = [&](const ConfigEntry& e) {
    const Expr v = expr_at(e);
    if (!v.is_constant()) throw ParseError(e.line, e.column, "value must be a constant");
    return v.constant_value();
  };
  auto function_of_x = [&](const ConfigEntry& e) {
    const Expr v = expr_at(e);
    if (v.depends_on_y()) throw ParseError(e.line, e.column, "expression may depend on x only");
    return v;
  };
  auto require = [&](const std::string& sec, const std::string& key) -> const ConfigEntry& {
    auto s = sections.find(sec);
    if (s == sections.end()) throw ParseError(line_no, 1, "missing section [" + sec + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) throw ParseError(line_no, 1, "missing key '" + key + "' in [" + sec + "]");
    return k->second;
  };
  auto optional_entry = [&](const std::string& sec, const std::string& key) -> const ConfigEntry* {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };

  for (const auto& [name, e] : parameters) def.parameters[name] = constant_at(e);

  SingularBVP& bvp = def.bvp;
  bvp.coeffs.p_exponent = constant_at(require("coefficients", "p_exponent"));
  bvp.coeffs.q_exponent = constant_at(require("coefficients", "q_exponent"));
  if (auto* e = optional_entry("coefficients", "p_smooth")) {
    const Expr v = function_of_x(*e);
    if (!v.is_constant(1.0)) bvp.coeffs.p_smooth = v;
  }
  if (auto* e = optional_entry("coefficients", "q_smooth")) {
    const Expr v = function_of_x(*e);
    if (!v.is_constant(1.0)) bvp.coeffs.q_smooth = v;
  }

  const ConfigEntry& fam = require("bc", "family");
  if (fam.value == "dirichlet-robin")
    bvp.bc.family = BcFamily::DirichletRobin;
  else if (fam.value == "neumann-robin")
    bvp.bc.family = BcFamily::NeumannRobin;
  else
    throw ParseError(fam.line, fam.column, "family must be dirichlet-robin or neumann-robin");
  if (bvp.bc.family == BcFamily::DirichletRobin)
    bvp.bc.delta1 = constant_at(require("bc", "delta1"));
  else if (auto* e = optional_entry("bc", "delta1"))
    throw ParseError(e->line, 1, "delta1 applies to dirichlet-robin only");
  bvp.bc.alpha = constant_at(require("bc", "alpha"));
  bvp.bc.beta = constant_at(require("bc", "beta"));
  bvp.bc.gamma = constant_at(require("bc", "gamma"));

  bvp.f = NonlinearityRule(expr_at(require("nonlinearity", "f")));
  if (auto* e = optional_entry("nonlinearity", "sign")) {
    if (e->value == "minus")
      bvp.sign = SignConvention::MinusDivForm;
    else if (e->value == "plus")
      bvp.sign = SignConvention::PlusDivForm;
    else
      throw ParseError(e->line, e->column, "sign must be minus or plus");
  }
  if (auto* e = optional_entry("nonlinearity", "initial_guess")) bvp.initial_guess = function_of_x(*e);
  if (auto* e = optional_entry("exact", "y")) def.exact_solution = function_of_x(*e);

  def.warnings = validate(bvp);
  build_kernel(bvp.coeffs, bvp.bc);  // ZeroMu and friends
  return def;
}

inline SingularBVP load_problem(std::string_view text) { return load_problem_definition(text).bvp; }

inline std::string benchmark_config(ProblemId id, const ParameterMap& params) {
  std::ostringstream o;
  o.precision(17);
  o << "oham-problem v1\n# " << problem_tag(id) << ": " << problem_title(id) << "\n[parameters]\n";
  for (const auto& [k, v] : params) o << k << " = " << v << "\n";
  switch (id) {
    case ProblemId::P1_DoublySingular:
      o << "[coefficients]\np_exponent = alpha\nq_exponent = alpha + beta - 2\n"
           "[bc]\nfamily = dirichlet-robin\ndelta1 = log(1/4)\nalpha = 1\nbeta = 0\ngamma = log(1/5)\n"
           "[nonlinearity]\nf = beta*(beta*x^beta*exp(2*y) - exp(y)*(alpha + beta - 1))\nsign = plus\n"
           "initial_guess = log(1/4)\n"
           "[exact]\ny = log(1/(4 + x^beta))\n";
      break;
    case ProblemId::P2_ThermalExplosion:
      o << "[coefficients]\np_exponent = 2\nq_exponent = 2\n"
           "[bc]\nfamily = neumann-robin\nalpha = 1\nbeta = 0\ngamma = 1\n"
           "[nonlinearity]\nf = sigma^2*y^n\nsign = plus\n";
      break;
    case ProblemId::P3_HumanHead:
      o << "[coefficients]\np_exponent = 2\nq_exponent = 2\n"
           "[bc]\nfamily = neumann-robin\nalpha = a2\nbeta = b2\ngamma = g2\n"
           "[nonlinearity]\nf = delta*exp(-y)\nsign = minus\n";
      break;
    case ProblemId::P4_OxygenDiffusion:
      o << "[coefficients]\np_exponent = 2\nq_exponent = 2\n"
           "[bc]\nfamily = neumann-robin\nalpha = 5\nbeta = 1\ngamma = 5\n"
           "[nonlinearity]\nf = n*y/(y + k)\nsign = plus\n";
      break;
    case ProblemId::P5_PerturbedLaneEmden:
      o << "[coefficients]\np_exponent = alpha\nq_exponent = alpha\n"
           "[bc]\nfamily = neumann-robin\nalpha = 2\nbeta = 1\ngamma = 0\n"
           "[nonlinearity]\nf = delta*exp(y/(1 + epsilon*y))\nsign = minus\n";
      break;
  }
  return o.str();
}

/// Builds a benchmark from its parameters; omitted optional parameters take
/// their defaults.
inline BenchmarkProblem registry_get(ProblemId id, const ParameterMap& given) {
  const detail::ProblemTemplate& t = detail::problem_template(id);
  ParameterMap params = t.defaults;
  for (const auto& [k, v] : given) {
    const bool known = t.defaults.count(k) || std::find(t.required.begin(), t.required.end(), k) != t.required.end();
    if (!known) throw Error(Errc::unknown_parameter, std::string(problem_tag(id)) + " has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw Error(Errc::validation_error, "parameter '" + k + "' must be finite");
    params[k] = v;
  }
  for (const std::string& k : t.required)
    if (!params.count(k)) throw Error(Errc::missing_parameter, std::string(problem_tag(id)) + " needs parameter '" + k + "'");

  ProblemDefinition def = load_problem_definition(benchmark_config(id, params));
  BenchmarkProblem p{id, params, std::move(def.bvp), std::move(def.exact_solution), detail::published_c0(id, params), {}};
  for (const PublishedTableCase& c : published_tables()) {
    if (c.id != id || !detail::same_parameters(c.parameters, params)) continue;
    for (const auto& [col, vals] : c.columns)
      for (int j = 0; j < 9; ++j) p.paper_table_rows.push_back({c.table, (j + 1) / 10.0, col, vals[static_cast<std::size_t>(j)]});
  }
  return p;
}

}  // namespace oham
