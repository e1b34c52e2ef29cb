#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oham/oham.hpp"

namespace {

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw oham::Error(oham::Errc::invalid_argument, std::string("malformed number in ") + what + ": '" + item + "'");
    }
  }
  return v;
}

struct Options {
  oham::RunConfig cfg;
  std::string problem, file, c0 = "auto", format = "csv", output, xs, bracket, initial_guess;
  std::vector<std::string> params;
  std::map<std::string, double> named;
  double lo = -2.0, hi = -0.05;
  int count = 41;
  int table = 0;
};

void add_problem_options(CLI::App* app, Options& o) {
  app->add_option("--problem", o.problem, "benchmark id P1..P5");
  app->add_option("--file", o.file, "problem config (oham-problem v1)");
  for (const char* name : {"alpha", "beta", "n", "sigma", "k", "delta", "epsilon", "a2", "b2", "g2"})
    app->add_option(std::string("--") + name, o.named[name], std::string("benchmark parameter ") + name);
  app->add_option("--param", o.params, "extra parameter name=value (repeatable)");
  app->add_option("--order", o.cfg.order, "series order M")->capture_default_str();
  app->add_option("--grid", o.cfg.grid.n_nodes, "collocation nodes")->capture_default_str();
  app->add_option("--quad", o.cfg.grid.quad_order, "Gauss points per panel")->capture_default_str();
  app->add_option("--stretch", o.cfg.grid.stretch, "grid stretch exponent (0 = auto)")->capture_default_str();
  app->add_option("--samples", o.cfg.samples, "residual sample count n")->capture_default_str();
  app->add_option("--format", o.format, "csv | markdown | jsonl")->capture_default_str();
  app->add_option("--output", o.output, "output path (default stdout)");
  app->add_option("--initial-guess", o.initial_guess, "y0 as an expression in x, or 'g'");
}

void finish_config(CLI::App* app, Options& o) {
  oham::RunConfig& c = o.cfg;
  c.format = oham::parse_format(o.format);
  if (!o.problem.empty()) c.problem = oham::parse_problem_id(o.problem);
  if (!o.file.empty()) c.file = o.file;
  if (c.problem && c.file) throw oham::Error(oham::Errc::invalid_argument, "--problem and --file are exclusive");
  for (const auto& [name, value] : o.named)
    if (app->count("--" + name)) c.parameters[name] = value;
  for (const std::string& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw oham::Error(oham::Errc::invalid_argument, "--param expects name=value");
    c.parameters[p.substr(0, eq)] = parse_list(p.substr(eq + 1), "--param").at(0);
  }
  if (c.file && !c.parameters.empty())
    throw oham::Error(oham::Errc::invalid_argument, "parameters come from the config file when --file is used");
  if (!o.initial_guess.empty()) c.initial_guess = o.initial_guess;
}

int run(int argc, char** argv) {
  CLI::App app{"Optimal homotopy analysis solver for doubly singular boundary value problems"};
  app.require_subcommand(1);
  Options o;

  CLI::App* solve = app.add_subcommand("solve", "solve one problem and report");
  add_problem_options(solve, o);
  solve->add_option("--c0", o.c0, "auto | fixed:<v> | sweep:<lo>,<hi>,<count>")->capture_default_str();
  solve->add_option("--xs", o.xs, "report points, comma separated");
  solve->add_option("--bracket", o.bracket, "search bracket lo,hi for auto c0");

  CLI::App* sweep = app.add_subcommand("sweep", "tabulate E_M(c0) over a range");
  add_problem_options(sweep, o);
  sweep->add_option("--lo", o.lo, "lower c0")->capture_default_str();
  sweep->add_option("--hi", o.hi, "upper c0")->capture_default_str();
  sweep->add_option("--count", o.count, "number of c0 values")->capture_default_str();

  CLI::App* table = app.add_subcommand("table", "rerun a published table and compare");
  table->add_option("id", o.table, "table number 1..9")->required();
  table->add_option("--grid", o.cfg.grid.n_nodes, "collocation nodes")->capture_default_str();
  table->add_option("--quad", o.cfg.grid.quad_order, "Gauss points per panel")->capture_default_str();
  table->add_option("--format", o.format, "csv | markdown | jsonl")->capture_default_str();
  table->add_option("--output", o.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::ostringstream buf;
  int code = 0;
  try {
    if (*table) {
      o.cfg.format = oham::parse_format(o.format);
      code = oham::cmd_table(o.table, o.cfg, buf);
    } else if (*sweep) {
      finish_config(sweep, o);
      o.cfg.c0_mode = oham::C0Mode::sweep;
      o.cfg.sweep_lo = o.lo;
      o.cfg.sweep_hi = o.hi;
      o.cfg.sweep_count = o.count;
      code = oham::cmd_sweep(o.cfg, buf);
    } else {
      finish_config(solve, o);
      if (!o.xs.empty()) o.cfg.xs = parse_list(o.xs, "--xs");
      if (!o.bracket.empty()) {
        const auto b = parse_list(o.bracket, "--bracket");
        if (b.size() != 2) throw oham::Error(oham::Errc::invalid_argument, "--bracket expects lo,hi");
        o.cfg.bracket = {b[0], b[1]};
      }
      if (o.c0 == "auto") {
        o.cfg.c0_mode = oham::C0Mode::automatic;
      } else if (o.c0.rfind("fixed:", 0) == 0) {
        o.cfg.c0_mode = oham::C0Mode::fixed;
        o.cfg.c0_fixed = parse_list(o.c0.substr(6), "--c0").at(0);
      } else if (o.c0.rfind("sweep:", 0) == 0) {
        const auto v = parse_list(o.c0.substr(6), "--c0");
        if (v.size() != 3) throw oham::Error(oham::Errc::invalid_argument, "--c0 sweep expects lo,hi,count");
        o.cfg.c0_mode = oham::C0Mode::sweep;
        o.cfg.sweep_lo = v[0];
        o.cfg.sweep_hi = v[1];
        o.cfg.sweep_count = static_cast<int>(v[2]);
      } else {
        throw oham::Error(oham::Errc::invalid_argument, "--c0 must be auto, fixed:<v> or sweep:<lo>,<hi>,<count>");
      }
      code = o.cfg.c0_mode == oham::C0Mode::sweep ? oham::cmd_sweep(o.cfg, buf) : oham::cmd_solve(o.cfg, buf).exit_code;
    }
  } catch (const oham::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const oham::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_validation() ? 2 : 3;
  }

  if (o.output.empty()) {
    std::cout << buf.str() << std::flush;
    if (!std::cout) return 1;
  } else {
    std::ofstream out(o.output, std::ios::binary);
    out << buf.str();
    if (!out) {
      std::cerr << "error: cannot write '" << o.output << "'\n";
      return 1;
    }
  }
  if (code == 3) std::cerr << "warning: the series diverged\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
