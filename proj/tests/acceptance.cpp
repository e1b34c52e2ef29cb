// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>

#include "oham/oham.hpp"
#include "oracle/oracle.hpp"

using namespace oham;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const PublishedTableCase& table_case(int table, int index = 0) {
  for (const PublishedTableCase& c : published_tables())
    if (c.table == table && index-- == 0) return c;
  throw Error(Errc::invalid_argument, "no such table case");
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::isfinite(x) ? std::max(m, x) : kInf;
  return m;
}

struct Solved {
  ContextPtr ctx;
  ResidualProfile profile;
  HomotopySeries series;
  GridFunction phi;
};

Solved solve(const SingularBVP& bvp, int M) {
  Solved s{make_context(bvp), {}, {}, {}};
  s.profile = optimize_c0(*s.ctx, M, {-2.0, -0.05});
  s.series = run_recursion(*s.ctx, s.profile.optimum, M);
  s.phi = assemble(s.series);
  return s;
}

double max_column_gap(const GridFunction& phi, const std::array<double, 9>& col) {
  double gap = 0.0;
  for (int j = 0; j < 9; ++j) gap = std::max(gap, std::fabs(phi((j + 1) / 10.0) - col[static_cast<std::size_t>(j)]));
  return gap;
}

Verdict problem_one() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const BenchmarkProblem p = registry_get(ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}});
  const Solved s = solve(p.bvp, 10);
  double err = 0.0;
  for (double x : report_points()) err = std::max(err, std::fabs(s.phi(x) - p.exact_solution->eval(x, 0.0)));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double gap = max_column_gap(s.phi, table_case(1).columns.at("phi10"));
  v.require(err <= 1e-10, "max error " + num(err));
  v.require(gap <= 1e-8, "solution column gap " + num(gap));
  v.require(secs <= 10.0, "runtime " + num(secs) + " s");
  v.detail = "max error " + num(err) + ", column gap " + num(gap) + ", " + num(secs) + " s" +
             (v.ok ? "" : " (" + v.detail + ")");
  return v;
}

Verdict optimal_c0() {
  Verdict v;
  struct Case {
    ProblemId id;
    ParameterMap params;
    int M;
    double target, tol;
  };
  const std::vector<Case> cases{
      {ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}}, 5, -0.970001, 0.01},
      {ProblemId::P4_OxygenDiffusion, {}, 5, -1.045949, 0.02},
      {ProblemId::P2_ThermalExplosion, {{"n", 2.0}, {"sigma", 1.5}}, 10, -0.6666666, 0.02},
      {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 5.0}}, 10, -0.608235, 0.05}};
  std::string all;
  for (const Case& c : cases) {
    const ContextPtr ctx = make_context(registry_get(c.id, c.params).bvp);
    const double got = optimize_c0(*ctx, c.M, {-2.0, -0.05}).optimum;
    const std::string tag = std::string(problem_tag(c.id)) + "/M=" + std::to_string(c.M);
    all += (all.empty() ? "" : ", ") + tag + " " + num(got);
    v.require(std::fabs(got - c.target) <= c.tol, tag + " " + num(got) + " vs " + num(c.target));
  }
  v.detail = all + (v.ok ? "" : " (out of window: " + v.detail + ")");
  return v;
}

Verdict problem_two() {
  Verdict v;
  const double bounds[] = {1e-7, 1e-4, 1e-2};
  std::string all;
  for (int t = 2; t <= 4; ++t) {
    const PublishedTableCase& c = table_case(t);
    const Solved s = solve(registry_get(c.id, c.parameters).bvp, 10);
    const double r = max_of(differential_residual(*s.ctx, s.phi, report_points()));
    all += (all.empty() ? "" : ", ") + std::string("table ") + std::to_string(t) + " " + num(r);
    v.require(r <= bounds[t - 2], "table " + std::to_string(t) + " residual " + num(r));
    if (t == 4) {
      const std::vector<double> n = component_norms(run_recursion(*s.ctx, -1.0, 10));
      const double ratio = n[10] / n[9];
      all += ", ADM ratio " + num(ratio);
      v.require(ratio > 1.0, "ADM norm ratio " + num(ratio));
    }
  }
  v.detail = all;
  return v;
}

Verdict solution_and_residual(std::initializer_list<std::pair<int, double>> tables, double solution_tol) {
  Verdict v;
  std::string all;
  for (const auto& [t, bound] : tables) {
    const PublishedTableCase& c = table_case(t);
    const Solved s = solve(registry_get(c.id, c.parameters).bvp, 10);
    const double r = max_of(differential_residual(*s.ctx, s.phi, report_points()));
    const double gap = max_column_gap(s.phi, c.columns.at("phi10"));
    all += (all.empty() ? "" : ", ") + std::string("table ") + std::to_string(t) + " residual " + num(r) + " gap " +
           num(gap);
    v.require(r <= bound, "table " + std::to_string(t) + " residual");
    v.require(gap <= solution_tol, "table " + std::to_string(t) + " solution");
  }
  v.detail = all;
  return v;
}

Verdict problem_five() {
  Verdict v;
  std::string all;
  for (int t : {8, 9})
    for (int i = 0; i < 3; ++i) {
      const PublishedTableCase& c = table_case(t, i);
      const Solved s = solve(registry_get(c.id, c.parameters).bvp, 10);
      const double r = max_of(differential_residual(*s.ctx, s.phi, report_points()));
      const double r_adm = max_of(differential_residual(*s.ctx, assemble(run_recursion(*s.ctx, -1.0, 10)), report_points()));
      std::ostringstream tag;
      tag << "a=" << c.parameters.at("alpha") << ",e=" << c.parameters.at("epsilon");
      all += (all.empty() ? "" : ", ") + tag.str() + " " + num(r) + "/" + num(r_adm);
      v.require(r <= 5e-2, tag.str() + " OHAM " + num(r));
      v.require(r_adm > 1.0, tag.str() + " ADM only " + num(r_adm));
    }
  v.detail = "OHAM/ADM max residual: " + all + (v.ok ? "" : " (" + v.detail + ")");
  return v;
}

Verdict adm_identity() {
  Verdict v;
  double worst = 0.0;
  for (const auto& [id, params] : std::vector<std::pair<ProblemId, ParameterMap>>{
           {ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}}},
           {ProblemId::P3_HumanHead, {{"a2", 1.0}, {"b2", 1.0}, {"g2", 0.0}}}}) {
    const ContextPtr ctx = make_context(registry_get(id, params).bvp);
    for (int M : {1, 5, 10}) {
      const HomotopySeries s = run_recursion(*ctx, -1.0, M);
      const auto ref = oracle::adm_recursion(*ctx, M);
      for (std::size_t k = 0; k < ref.size(); ++k) {
        const double scale = std::max(1.0, ref[k].values.cwiseAbs().maxCoeff());
        worst = std::max(worst, (s.components[k].values - ref[k].values).cwiseAbs().maxCoeff() / scale);
      }
    }
  }
  v.require(worst <= 1e-12, "gap");
  v.detail = "max relative component gap " + num(worst);
  return v;
}

Verdict linear_oracle() {
  Verdict v;
  SingularBVP b = registry_get(ProblemId::P3_HumanHead, {{"a2", 1.0}, {"b2", 1.0}, {"g2", 0.0}}).bvp;
  b.f = NonlinearityRule(parse_expr("1 - 0.1*y"));
  const ContextPtr ctx = make_context(b);
  const LipschitzResult lip = lipschitz_check(*ctx, {-10.0, 10.0});
  const GridFunction a = GridFunction::sample(ctx->grid, [](double) { return -0.1; });
  const GridFunction one = GridFunction::sample(ctx->grid, [](double) { return 1.0; });
  const GridFunction ref = oracle::solve_linear_fredholm(ctx->op, ctx->g, a, one);
  const ResidualProfile prof = optimize_c0(*ctx, 30, {-2.0, -0.05});
  const double gap = (assemble(run_recursion(*ctx, prof.optimum, 30)).values - ref.values).cwiseAbs().maxCoeff();
  const double lm = lip.L * lip.kernel_mass;
  v.require(lm < 0.5, "L*mass " + num(lm));
  v.require(gap <= 1e-8, "gap");
  v.detail = "L*mass " + num(lm) + ", sup gap " + num(gap);
  return v;
}

Verdict truncation_bound() {
  Verdict v;
  const BenchmarkProblem p = registry_get(ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}});
  const ContextPtr ctx = make_context(p.bvp);
  for (int M : {3, 5, 8, 10}) {
    const ResidualProfile prof = optimize_c0(*ctx, M, {-2.0, -0.05});
    const SolveReport r = make_report(*ctx, run_recursion(*ctx, prof.optimum, M), prof, report_points(), p.exact_solution);
    const double err = max_of(*r.abs_error);
    const std::string tag = "M=" + std::to_string(M);
    v.require(r.theorem2_bound.has_value() && *r.theorem2_bound >= err, tag);
    v.detail += (v.detail.empty() ? "" : ", ") + tag + " bound " +
                (r.theorem2_bound ? num(*r.theorem2_bound) : std::string("none")) + " >= " + num(err);
  }
  return v;
}

Expr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
  std::uniform_real_distribution<double> c(0.2, 1.5);
  switch (pick(rng)) {
    case 0: return Expr::y();
    case 1: return Expr::constant(c(rng)) + Expr::x();
    case 2: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 3: return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
    case 4: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 5: return random_tree(rng, depth - 1) / (Expr::constant(2.0) + pow(random_tree(rng, depth - 1), 2.0));
    case 6: return exp(Expr::constant(0.5) * random_tree(rng, depth - 1));
    case 7: return log(Expr::constant(1.0) + pow(random_tree(rng, depth - 1), 2.0));
    default: return pow(Expr::constant(1.0) + pow(random_tree(rng, depth - 1), 2.0), c(rng));
  }
}

std::vector<std::pair<ProblemId, ParameterMap>> benchmarks() {
  return {{ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}}},
          {ProblemId::P2_ThermalExplosion, {{"n", 1.5}, {"sigma", 1.0}}},
          {ProblemId::P2_ThermalExplosion, {{"n", 2.0}, {"sigma", 2.0}}},
          {ProblemId::P3_HumanHead, {{"a2", 1.0}, {"b2", 1.0}, {"g2", 0.0}}},
          {ProblemId::P4_OxygenDiffusion, {}},
          {ProblemId::P5_PerturbedLaneEmden, {{"alpha", 2.0}, {"epsilon", 5.0}}}};
}

Verdict structural() {
  Verdict v;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  double sym = 0.0;
  for (const auto& [id, params] : benchmarks()) {
    const GreensKernel k = make_context(registry_get(id, params).bvp, {16, 40, 0})->kernel;
    for (int j = 0; j < 1000; ++j) {
      const double x = u01(rng), s = u01(rng);
      const double a = eval_G(k, x, s), b = eval_G(k, s, x);
      sym = std::max(sym, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
    }
  }
  v.require(sym <= 1e-12, "kernel symmetry " + num(sym));

  // BC preservation holds for the default initial guess y0 = g.
  SingularBVP p1 = registry_get(ProblemId::P1_DoublySingular, {{"alpha", 0.5}, {"beta", 1.0}}).bvp;
  p1.initial_guess.reset();
  const ContextPtr ctx = make_context(p1);
  std::uniform_real_distribution<double> uc(-1.5, -0.2);
  double bc = 0.0;
  for (int t = 0; t < 10; ++t) {
    const GridFunction phi = assemble(run_recursion(*ctx, uc(rng), 8));
    const double scale = std::max(1.0, phi.values.cwiseAbs().maxCoeff());
    bc = std::max({bc, std::fabs(phi(0.0) - p1.bc.delta1) / scale, std::fabs(phi(1.0) - p1.bc.gamma) / scale});
  }
  v.require(bc <= 1e-9, "BC preservation " + num(bc));

  double lin = 0.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd a(ctx->grid->size()), b(ctx->grid->size());
    for (int i = 0; i < ctx->grid->size(); ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    const double s = u(rng), w = u(rng);
    const Eigen::VectorXd lhs = ctx->op.apply(Eigen::VectorXd(s * a + w * b));
    lin = std::max(lin, (lhs - s * ctx->op.apply(a) - w * ctx->op.apply(b)).cwiseAbs().maxCoeff());
  }
  v.require(lin <= 1e-12, "linearity " + num(lin));

  double jet = 0.0;
  int trees = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Expr f = random_tree(rng, 3);
    if (!f.depends_on_y()) continue;
    const NonlinearityRule rule(f);
    const double x = 0.05 + 0.9 * u01(rng);
    std::vector<double> comps{0.5};
    for (int k = 1; k <= 8; ++k) comps.push_back(0.3 * u(rng) / k);
    const Jet j = jet_compose(rule, x, Jet(comps));
    for (int k = 0; k <= 8; ++k) {
      const double ref = oracle::adomian_oracle(rule, x, comps, k);
      jet = std::max(jet, std::fabs(j[static_cast<std::size_t>(k)] - ref) / std::max(1.0, std::fabs(ref)));
    }
    ++trees;
  }
  v.require(jet <= 1e-10, "jet vs oracle " + num(jet));

  int beaten = 0;
  for (const auto& [id, params] : benchmarks()) {
    const ContextPtr c = make_context(registry_get(id, params).bvp);
    for (int M : {5, 10}) {
      const ResidualProfile prof = optimize_c0(*c, M, {-2.0, -0.05});
      if (!(prof.E_at_optimum <= discrete_E(*c, -1.0, M, 20))) ++beaten;
    }
  }
  v.require(beaten == 0, std::to_string(beaten) + " cases where ADM beats the optimum");

  if (v.ok)
    v.detail = "symmetry " + num(sym) + ", BC " + num(bc) + ", linearity " + num(lin) + ", jets " + num(jet) + " over " +
               std::to_string(trees) + " trees, E(opt) <= E(-1) on 12 runs";
  return v;
}

Verdict determinism() {
  Verdict v;
  auto run = [](const char* threads) {
    ::setenv("OHAM_THREADS", threads, 1);
    RunConfig c;
    c.problem = ProblemId::P5_PerturbedLaneEmden;
    c.parameters = {{"alpha", 2.0}, {"epsilon", 5.0}};
    std::ostringstream out;
    cmd_solve(c, out);
    return out.str();
  };
  const std::string a = run("1"), b = run("8");
  ::unsetenv("OHAM_THREADS");
  v.require(a == b, "reports differ");
  v.detail = std::to_string(a.size()) + " byte reports " + (a == b ? "identical" : "differ");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"problem 1 accuracy", problem_one},
      {"optimal c0 reproduction", optimal_c0},
      {"problem 2 residuals", problem_two},
      {"problem 3 residuals", [] { return solution_and_residual({{5, 1e-4}, {6, 1e-5}}, 1e-4); }},
      {"problem 4 residuals", [] { return solution_and_residual({{7, 1e-8}}, 1e-7); }},
      {"problem 5 stabilization", problem_five},
      {"ADM reduction identity", adm_identity},
      {"linear oracle equivalence", linear_oracle},
      {"truncation bound validity", truncation_bound},
      {"structural properties", structural},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.ok) ++failed;
    std::printf("%s %2zu %s: %s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
