#pragma once

// Choice of c0 by minimizing E_M(c0) = mean_j T[phi_M](x_j)^2 over
// x_j = j/(n+1), with T[y] = y - g - K f~(y).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "oham/context.hpp"
#include "oham/error.hpp"
#include "oham/homotopy.hpp"
#include "oham/parallel.hpp"

namespace oham {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Node values of f~(x, phi(x)).
inline Eigen::VectorXd nonlinearity_samples(const SolveContext& ctx, const GridFunction& phi) {
  Eigen::VectorXd v(phi.size());
  for (int i = 0; i < phi.size(); ++i) v[i] = ctx.rule(ctx.grid->nodes()[i], phi.values[i]);
  return v;
}

/// T[phi] at the nodes.
inline GridFunction integral_residual(const SolveContext& ctx, const GridFunction& phi) {
  return {ctx.grid, phi.values - ctx.g.values - ctx.op.apply(nonlinearity_samples(ctx, phi))};
}

inline double integral_residual(const SolveContext& ctx, const GridFunction& phi, double x) {
  return integral_residual(ctx, phi)(x);
}

inline std::vector<double> residual_sample_points(int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) xs[static_cast<std::size_t>(j - 1)] = double(j) / (n + 1);
  return xs;
}

/// E_M for an already computed series; +inf for flagged or non-finite ones.
inline double discrete_E(const SolveContext& ctx, const HomotopySeries& s, int n) {
  if (s.diverged) return kInf;
  try {
    const GridFunction r = integral_residual(ctx, assemble(s));
    if (!r.values.allFinite()) return kInf;
    double sum = 0.0;
    for (double x : residual_sample_points(n)) {
      const double v = r(x);
      sum += v * v;
    }
    const double e = sum / n;
    return std::isfinite(e) ? e : kInf;
  } catch (const Error&) {
    return kInf;
  }
}

inline double discrete_E(const SolveContext& ctx, double c0, int M, int n, std::size_t workers = worker_count()) {
  if (n < 2) throw Error(Errc::invalid_argument, "residual sample count must be at least 2");
  if (c0 == 0.0) return kInf;
  try {
    return discrete_E(ctx, run_recursion(ctx, c0, M, workers), n);
  } catch (const Error& e) {
    if (e.code() == Errc::jet_domain_error || e.code() == Errc::domain_error) return kInf;
    throw;
  }
}

struct ResidualProfile {
  std::vector<std::pair<double, double>> samples;  // (c0, E), ascending c0
  double lo = 0.0, hi = 0.0;
  double optimum = 0.0;
  double E_at_optimum = kInf;
};

class NoFiniteSampleError : public Error {
 public:
  explicit NoFiniteSampleError(ResidualProfile p)
      : Error(Errc::no_finite_sample, "every trial c0 in the bracket diverged"), profile_(std::move(p)) {}
  const ResidualProfile& profile() const { return profile_; }

 private:
  ResidualProfile profile_;
};

struct OptimizerOptions {
  int scan_points = 41;
  double tolerance = 1e-7;
  bool audit_adm = true;  // also sample c0 = -1 when it lies inside the bracket
};

/// E_M at each c0, evaluated concurrently; order of the output follows cs.
inline std::vector<double> evaluate_E(const SolveContext& ctx, const std::vector<double>& cs, int M, int n,
                                      std::size_t workers = worker_count()) {
  std::vector<double> es(cs.size());
  parallel_for(cs.size(), [&](std::size_t j) { es[j] = discrete_E(ctx, cs[j], M, n, 1); }, workers);
  return es;
}

/// Coarse scan followed by golden-section refinement between the scan
/// neighbours of the best sample.
inline ResidualProfile optimize_c0(const SolveContext& ctx, int M, std::pair<double, double> bracket, int n = 20,
                                   const OptimizerOptions& opt = {}, std::size_t workers = worker_count()) {
  const auto [lo, hi] = bracket;
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(Errc::invalid_argument, "c0 bracket must satisfy lo < hi");
  if (opt.scan_points < 3) throw Error(Errc::invalid_argument, "scan needs at least 3 points");

  std::vector<double> cs;
  for (int j = 0; j < opt.scan_points; ++j) cs.push_back(lo + (hi - lo) * j / (opt.scan_points - 1));
  cs.back() = hi;
  if (opt.audit_adm && lo < -1.0 && -1.0 < hi && std::find(cs.begin(), cs.end(), -1.0) == cs.end()) {
    cs.push_back(-1.0);
    std::sort(cs.begin(), cs.end());
  }
  const std::vector<double> es = evaluate_E(ctx, cs, M, n, workers);

  ResidualProfile prof;
  prof.lo = lo;
  prof.hi = hi;
  for (std::size_t j = 0; j < cs.size(); ++j) prof.samples.emplace_back(cs[j], es[j]);
  const auto best = static_cast<std::size_t>(std::min_element(es.begin(), es.end()) - es.begin());
  if (!std::isfinite(es[best])) throw NoFiniteSampleError(prof);

  double a = cs[best > 0 ? best - 1 : 0];
  double b = cs[std::min(best + 1, cs.size() - 1)];
  auto E = [&](double c) { return discrete_E(ctx, c, M, n, workers); };
  const double R = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - R * (b - a), d = a + R * (b - a);
  double fc = E(c), fd = E(d);
  while (b - a > opt.tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - R * (b - a);
      fc = E(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + R * (b - a);
      fd = E(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = E(mid);
  if (fmid < es[best]) {
    prof.optimum = mid;
    prof.E_at_optimum = fmid;
  } else {
    prof.optimum = cs[best];
    prof.E_at_optimum = es[best];
  }
  return prof;
}

/// (c0, E) rows for count equispaced c0 in [lo, hi].
inline std::vector<std::pair<double, double>> sweep_c0(const SolveContext& ctx, int M, double lo, double hi,
                                                       int count, int n = 20, std::size_t workers = worker_count()) {
  if (!(lo < hi) || count < 2) throw Error(Errc::invalid_argument, "sweep needs lo < hi and count >= 2");
  std::vector<double> cs;
  for (int j = 0; j < count; ++j) cs.push_back(lo + (hi - lo) * j / (count - 1));
  cs.back() = hi;
  const std::vector<double> es = evaluate_E(ctx, cs, M, n, workers);
  std::vector<std::pair<double, double>> rows;
  for (std::size_t j = 0; j < cs.size(); ++j) rows.emplace_back(cs[j], es[j]);
  return rows;
}

}  // namespace oham
