#pragma once

// The deformation recursion
//   y_1 = c0 (y_0 - g - K D_0)
//   y_k = (1 + c0) y_{k-1} - c0 K D_{k-1},   k >= 2
// where D_j is the j-th homotopy derivative of f~ along the series.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oham/context.hpp"
#include "oham/error.hpp"
#include "oham/grid.hpp"
#include "oham/jet.hpp"
#include "oham/parallel.hpp"

namespace oham {

struct HomotopySeries {
  double c0 = -1.0;
  std::vector<GridFunction> components;  // y_0 ... y_M
  int order = 0;                         // index of the last stored component
  bool diverged = false;
  std::string reason;
};

/// Node values of D_{k-1}, the coefficient of r^(k-1) in f~(x, sum_j y_j r^j),
/// using components 0..k-1.
inline Eigen::VectorXd homotopy_derivative(const SolveContext& ctx, const std::vector<GridFunction>& comps, int k,
                                           std::size_t workers = worker_count()) {
  const int n = ctx.grid->size();
  Eigen::VectorXd d(n);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t node) {
        const int i = static_cast<int>(node);
        std::vector<double> coeffs(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) coeffs[static_cast<std::size_t>(j)] = comps[static_cast<std::size_t>(j)].values[i];
        const double x = ctx.grid->nodes()[i];
        try {
          d[i] = jet_compose(ctx.rule, x, Jet(std::move(coeffs)))[static_cast<std::size_t>(k - 1)];
        } catch (const Error& e) {
          if (e.code() != Errc::domain_error) throw;
          throw Error(Errc::jet_domain_error, "node " + std::to_string(i) + " (x = " + std::to_string(x) +
                                                  "), order " + std::to_string(k - 1) + ": " + e.what());
        }
      },
      workers);
  return d;
}

/// Runs the recursion to order M. A non-finite component stops the series
/// and flags it; explosive growth (successive norm ratio above 10) flags it
/// but keeps going. Domain failures of f~ surface as jet_domain_error.
inline HomotopySeries run_recursion(const SolveContext& ctx, double c0, int M, std::size_t workers = worker_count()) {
  if (c0 == 0.0 || !std::isfinite(c0)) throw Error(Errc::invalid_argument, "c0 must be finite and nonzero");
  if (M < 1) throw Error(Errc::invalid_argument, "order M must be at least 1");
  HomotopySeries s;
  s.c0 = c0;
  s.components.reserve(static_cast<std::size_t>(M) + 1);
  s.components.push_back(ctx.y0);
  const double floor = 1e-6 * std::max(1.0, ctx.y0.values.cwiseAbs().maxCoeff());
  double prev_norm = 0.0;
  for (int k = 1; k <= M; ++k) {
    const Eigen::VectorXd integral = ctx.op.apply(homotopy_derivative(ctx, s.components, k, workers));
    Eigen::VectorXd yk = k == 1 ? Eigen::VectorXd(c0 * (ctx.y0.values - ctx.g.values - integral))
                                : Eigen::VectorXd((1.0 + c0) * s.components.back().values - c0 * integral);
    if (!yk.allFinite()) {
      s.diverged = true;
      s.reason = "non-finite values in component " + std::to_string(k);
      break;
    }
    const double norm = yk.cwiseAbs().maxCoeff();
    if (k >= 2 && !s.diverged && norm > floor && norm > 10.0 * prev_norm) {
      s.diverged = true;
      s.reason = "component " + std::to_string(k) + " grew more than tenfold";
    }
    prev_norm = norm;
    s.components.emplace_back(ctx.grid, std::move(yk));
  }
  s.order = static_cast<int>(s.components.size()) - 1;
  return s;
}

/// phi_M as a node-wise compensated sum in ascending k.
inline GridFunction assemble(const HomotopySeries& s) {
  const GridFunction& first = s.components.front();
  const auto n = first.values.size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n), comp = Eigen::VectorXd::Zero(n);
  for (const GridFunction& c : s.components) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = c.values[i];
      const double t = sum[i] + v;
      comp[i] += std::fabs(sum[i]) >= std::fabs(v) ? (sum[i] - t) + v : (v - t) + sum[i];
      sum[i] = t;
    }
  }
  return {first.grid, sum + comp};
}

/// The first M' + 1 components.
inline HomotopySeries truncate(const HomotopySeries& s, int order) {
  HomotopySeries t = s;
  t.components.resize(static_cast<std::size_t>(std::min(order, s.order)) + 1);
  t.order = static_cast<int>(t.components.size()) - 1;
  return t;
}

/// max |f| over the nodes and a tenfold oversampling in the computational
/// coordinate.
inline double sup_norm(const GridFunction& f) {
  const CollocationGrid& g = *f.grid;
  double m = f.values.cwiseAbs().maxCoeff();
  const int fine = 10 * (g.size() - 1);
  for (int j = 1; j < fine; ++j) m = std::max(m, std::fabs(g.interpolate(f.values, g.to_x(double(j) / fine))));
  return m;
}

inline std::vector<double> component_norms(const HomotopySeries& s) {
  std::vector<double> out;
  out.reserve(s.components.size());
  for (const GridFunction& c : s.components) out.push_back(sup_norm(c));
  return out;
}

}  // namespace oham
