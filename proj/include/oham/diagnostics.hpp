#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oham/context.hpp"
#include "oham/error.hpp"
#include "oham/homotopy.hpp"
#include "oham/optimizer.hpp"

namespace oham {

/// Node values of the flux p(x) phi'(x). Under x = t^k the flux is
/// p~ t^(k a - k + 1) (d phi/dt) / k, which stays finite at t = 0.
inline Eigen::VectorXd flux(const SolveContext& ctx, const GridFunction& phi) {
  const CollocationGrid& g = *ctx.grid;
  const CoefficientPair& c = ctx.bvp.coeffs;
  const double k = g.stretch();
  const double ex = k * c.p_exponent - k + 1.0;
  const Eigen::VectorXd dt = g.t_diff_matrix() * phi.values;
  Eigen::VectorXd f(g.size());
  for (int i = 1; i < g.size(); ++i) f[i] = c.p_tilde(g.nodes()[i]) * std::pow(g.t_nodes()[i], ex) * dt[i] / k;
  if (ex > 0.0)
    f[0] = 0.0;
  else if (ex == 0.0)
    f[0] = c.p_tilde(0.0) * dt[0] / k;
  else
    f[0] = g.extrapolate_to_zero(f);
  return f;
}

/// |(p phi')' + q f~(phi)| at each x, which is the residual of the problem
/// as stated in either sign convention.
inline std::vector<double> differential_residual(const SolveContext& ctx, const GridFunction& phi,
                                                 const std::vector<double>& xs) {
  // d/dx = (d/dt) / (k t^(k-1)); the t-derivative is interpolated before the
  // division because (p phi')' itself may be singular at 0.
  const CollocationGrid& g = *ctx.grid;
  const Eigen::VectorXd dflux_dt = g.t_diff_matrix() * flux(ctx, phi);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (!(x > 0.0 && x <= 1.0)) throw Error(Errc::domain_error, "differential residual needs x in (0,1]");
    const double t = g.to_t(x);
    const double d = g.interpolate(dflux_dt, x) / (g.stretch() * std::pow(t, g.stretch() - 1));
    out.push_back(std::fabs(d + ctx.bvp.coeffs.q(x) * ctx.rule(x, phi(x))));
  }
  return out;
}

/// The differential residual divided by q(x): |(p phi')'/q + f~(phi)|.
/// Removes the x^b factor that otherwise hides the error near the origin.
inline std::vector<double> scaled_residual(const SolveContext& ctx, const GridFunction& phi,
                                           const std::vector<double>& xs) {
  std::vector<double> r = differential_residual(ctx, phi, xs);
  for (std::size_t j = 0; j < xs.size(); ++j) r[j] /= ctx.bvp.coeffs.q(xs[j]);
  return r;
}

struct RatioTest {
  std::vector<double> ratios;  // ||y_{k+1}|| / ||y_k||, k = 0..M-1
  std::optional<int> k0;
  std::optional<double> delta;
};

inline RatioTest ratio_test(const std::vector<double>& norms) {
  RatioTest r;
  for (std::size_t k = 0; k + 1 < norms.size(); ++k) {
    const double a = norms[k], b = norms[k + 1];
    r.ratios.push_back(a > 0.0 ? b / a : (b > 0.0 ? kInf : 0.0));
  }
  if (r.ratios.empty()) return r;
  std::size_t start = r.ratios.size();
  while (start > 0 && r.ratios[start - 1] < 1.0) --start;
  if (start < r.ratios.size()) {
    r.k0 = static_cast<int>(start);
    r.delta = *std::max_element(r.ratios.begin() + static_cast<std::ptrdiff_t>(start), r.ratios.end());
  }
  return r;
}

inline RatioTest ratio_test(const HomotopySeries& s) { return ratio_test(component_norms(s)); }

/// delta^(M - k0 + 1) / (1 - delta) * ||y_k0||.
inline double theorem2_bound(const std::vector<double>& norms, int k0, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::invalid_delta, "delta must lie in (0,1)");
  if (k0 < 0 || static_cast<std::size_t>(k0) >= norms.size()) throw Error(Errc::invalid_argument, "k0 out of range");
  const int M = static_cast<int>(norms.size()) - 1;
  return std::pow(delta, M - k0 + 1) / (1.0 - delta) * norms[static_cast<std::size_t>(k0)];
}

inline double theorem2_bound(const HomotopySeries& s, int k0, double delta) {
  return theorem2_bound(component_norms(s), k0, delta);
}

struct LipschitzResult {
  double L = 0.0;
  double kernel_mass = 0.0;
  bool contraction = false;
  double y_lo = 0.0, y_hi = 0.0;
  int skipped = 0;  // (x, y) samples where f_y was undefined
};

/// L = max |f~_y| over grid nodes and y samples in range, against the
/// kernel mass max_x int |G q| ds.
inline LipschitzResult lipschitz_check(const SolveContext& ctx, std::pair<double, double> y_range, int y_samples = 41) {
  LipschitzResult r;
  r.y_lo = y_range.first;
  r.y_hi = y_range.second;
  r.kernel_mass = ctx.op.max_abs_mass();
  const Expr& fy = ctx.rule.derivative();
  for (int i = 0; i < ctx.grid->size(); ++i) {
    const double x = ctx.grid->nodes()[i];
    for (int j = 0; j < y_samples; ++j) {
      const double y = r.y_lo + (r.y_hi - r.y_lo) * j / std::max(1, y_samples - 1);
      try {
        const double v = std::fabs(fy.eval(x, y));
        if (std::isfinite(v))
          r.L = std::max(r.L, v);
        else
          ++r.skipped;
      } catch (const Error&) {
        ++r.skipped;
      }
    }
  }
  r.contraction = r.L * r.kernel_mass < 1.0;
  return r;
}

/// The node range of phi widened by 10% of its span on each side.
inline std::pair<double, double> inflated_range(const GridFunction& phi) {
  const double lo = phi.values.minCoeff(), hi = phi.values.maxCoeff();
  double pad = 0.1 * (hi - lo);
  if (pad == 0.0) pad = 0.1 * std::max(1.0, std::fabs(lo));
  return {lo - pad, hi + pad};
}

struct SolveReport {
  GridFunction phi;
  int order = 0;
  double c0_opt = 0.0;
  double E = 0.0;  // E_M at c0_opt
  std::optional<ResidualProfile> E_profile;
  std::vector<double> norms;
  RatioTest ratios;
  std::optional<double> theorem2_bound;
  LipschitzResult lipschitz;
  std::vector<double> xs;
  std::vector<double> phi_at;
  std::vector<double> diff_residual;
  std::vector<double> scaled_residual;
  std::optional<std::vector<double>> abs_error;
  bool diverged = false;
  std::string reason;
};

inline std::vector<double> report_points() {
  std::vector<double> xs;
  for (int j = 1; j <= 9; ++j) xs.push_back(j / 10.0);
  return xs;
}

inline SolveReport make_report(const SolveContext& ctx, const HomotopySeries& s,
                               std::optional<ResidualProfile> profile, const std::vector<double>& xs,
                               const std::optional<Expr>& exact, int n_samples = 20) {
  SolveReport r;
  r.phi = assemble(s);
  r.order = s.order;
  r.c0_opt = s.c0;
  r.E = discrete_E(ctx, s, n_samples);
  r.E_profile = std::move(profile);
  r.norms = component_norms(s);
  r.ratios = ratio_test(r.norms);
  if (r.ratios.delta && r.ratios.k0) {
    if (*r.ratios.delta == 0.0)
      r.theorem2_bound = 0.0;
    else if (*r.ratios.delta < 1.0)
      r.theorem2_bound = theorem2_bound(r.norms, *r.ratios.k0, *r.ratios.delta);
  }
  r.lipschitz = lipschitz_check(ctx, inflated_range(r.phi));
  r.xs = xs;
  r.diverged = s.diverged;
  r.reason = s.reason;
  for (double x : xs) r.phi_at.push_back(r.phi(x));
  try {
    r.diff_residual = differential_residual(ctx, r.phi, xs);
    r.scaled_residual = scaled_residual(ctx, r.phi, xs);
  } catch (const Error&) {
    r.diff_residual.assign(xs.size(), kInf);
    r.scaled_residual.assign(xs.size(), kInf);
  }
  if (exact) {
    std::vector<double> err;
    for (std::size_t j = 0; j < xs.size(); ++j) err.push_back(std::fabs(r.phi_at[j] - exact->eval(xs[j], 0.0)));
    r.abs_error = std::move(err);
  }
  return r;
}

}  // namespace oham
