#pragma once

// Chebyshev-Gauss-Lobatto collocation on [0,1], optionally stretched by
// x = t^kappa so that components carrying x^(1/kappa) terms stay polynomial
// in the computational variable t.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "oham/coefficients.hpp"
#include "oham/error.hpp"
#include "oham/quadrature.hpp"

namespace oham {

struct GridOptions {
  int n_nodes = 64;
  int quad_order = 40;
  int stretch = 0;  // 0 selects automatically from the coefficient exponents
};

/// Smallest m <= 8 with m(1 - a) integral, else 1. For p = x^a the
/// reciprocal primitive behaves like x^(1-a), which becomes a polynomial in
/// t under x = t^m.
inline int auto_stretch(double p_exponent) {
  for (int m = 1; m <= 8; ++m) {
    const double v = m * (1.0 - p_exponent);
    if (std::fabs(v - std::round(v)) < 1e-12) return m;
  }
  return 1;
}

class CollocationGrid {
 public:
  explicit CollocationGrid(int n_nodes = 64, int quad_order = 40, int stretch = 1)
      : n_(n_nodes), quad_order_(quad_order), kappa_(stretch) {
    if (n_nodes < 8) throw Error(Errc::invalid_argument, "grid needs at least 8 nodes");
    if (quad_order < 2) throw Error(Errc::invalid_argument, "quadrature order must be at least 2");
    if (stretch < 1) throw Error(Errc::invalid_argument, "stretch must be a positive integer");
    t_.resize(n_);
    x_.resize(n_);
    w_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      const double s = std::sin(std::numbers::pi * j / (2.0 * (n_ - 1)));
      t_[j] = s * s;
      w_[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == n_ - 1) ? 0.5 : 1.0);
    }
    t_[0] = 0.0;
    t_[n_ - 1] = 1.0;
    for (int j = 0; j < n_; ++j) x_[j] = to_x(t_[j]);
    dt_.setZero(n_, n_);
    for (int i = 0; i < n_; ++i) {
      double diag = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        dt_(i, j) = (w_[j] / w_[i]) / (t_[i] - t_[j]);
        diag -= dt_(i, j);
      }
      dt_(i, i) = diag;
    }
  }

  int size() const { return n_; }
  int quad_order() const { return quad_order_; }
  int stretch() const { return kappa_; }
  const Eigen::VectorXd& nodes() const { return x_; }
  const Eigen::VectorXd& t_nodes() const { return t_; }
  const Eigen::VectorXd& bary_weights() const { return w_; }
  const Eigen::MatrixXd& t_diff_matrix() const { return dt_; }

  double to_x(double t) const { return kappa_ == 1 ? t : std::pow(t, kappa_); }
  double to_t(double x) const { return kappa_ == 1 ? x : std::pow(x, 1.0 / kappa_); }

  /// Lagrange basis values at computational coordinate t.
  Eigen::RowVectorXd basis_t(double t) const {
    Eigen::RowVectorXd row(n_);
    double denom = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double d = t - t_[j];
      if (d == 0.0) {
        row.setZero();
        row[j] = 1.0;
        return row;
      }
      row[j] = w_[j] / d;
      denom += row[j];
    }
    return row / denom;
  }

  double interpolate(const Eigen::VectorXd& f, double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::domain_error, "interpolation point outside [0,1]");
    const double t = to_t(x);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double d = t - t_[j];
      if (d == 0.0) return f[j];
      const double c = w_[j] / d;
      num += c * f[j];
      den += c;
    }
    return num / den;
  }

  /// d/dx at the nodes. For kappa > 1 the chain-rule factor is singular at
  /// t = 0, so that entry is extrapolated from the remaining nodes.
  Eigen::VectorXd differentiate(const Eigen::VectorXd& f) const {
    Eigen::VectorXd d = dt_ * f;
    if (kappa_ == 1) return d;
    for (int i = 1; i < n_; ++i) d[i] /= kappa_ * std::pow(t_[i], kappa_ - 1);
    d[0] = extrapolate_to_zero(d);
    return d;
  }

  /// Value at t = 0 of the interpolant through nodes 1..n-1. Dropping node 0
  /// multiplies the remaining barycentric weights by t_j, which cancels the
  /// 1/(0 - t_j) factor.
  double extrapolate_to_zero(const Eigen::VectorXd& f) const {
    double num = 0.0, den = 0.0;
    for (int j = 1; j < n_; ++j) {
      num += w_[j] * f[j];
      den += w_[j];
    }
    return num / den;
  }

 private:
  int n_;
  int quad_order_;
  int kappa_;
  Eigen::VectorXd t_, x_, w_;
  Eigen::MatrixXd dt_;
};

using GridPtr = std::shared_ptr<const CollocationGrid>;

struct GridFunction {
  GridPtr grid;
  Eigen::VectorXd values;

  GridFunction() = default;
  GridFunction(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    if (grid && values.size() != grid->size())
      throw Error(Errc::invalid_argument, "grid function length does not match grid");
  }

  template <class F>
  static GridFunction sample(GridPtr g, F&& fn) {
    Eigen::VectorXd v(g->size());
    for (int i = 0; i < g->size(); ++i) v[i] = fn(g->nodes()[i]);
    return {std::move(g), std::move(v)};
  }

  double operator()(double x) const { return grid->interpolate(values, x); }
  int size() const { return static_cast<int>(values.size()); }
};

inline double interpolate(const GridFunction& f, double x) { return f(x); }

inline GridFunction differentiate(const GridFunction& f) { return {f.grid, f.grid->differentiate(f.values)}; }

namespace detail {

// Gauss-Legendre over [lo, hi] split geometrically toward lo, for integrands
// that are smooth but steep near a small positive lo.
template <class F>
double graded_integral(F&& fn, double lo, double hi, int order) {
  const QuadRule& gl = gauss_legendre01(order);
  double total = 0.0;
  double a = lo;
  while (a < hi) {
    double b = (a > 0.0 && 4.0 * a < hi) ? 4.0 * a : hi;
    double s = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) s += gl.weights[k] * fn(a + (b - a) * gl.nodes[k]);
    total += s * (b - a);
    a = b;
  }
  return total;
}

}  // namespace detail

/// h(x) = integral of 1/p over [0, x]; needs p_exponent < 1.
inline double reciprocal_integral_from_zero(const CoefficientPair& c, double x, int order = 40) {
  const double a = c.p_exponent;
  if (!(a < 1.0)) throw Error(Errc::non_integrable_reciprocal, "1/p is not integrable at 0 (p exponent >= 1)");
  if (x <= 0.0) return 0.0;
  if (c.p_is_power_law()) return std::pow(x, 1.0 - a) / (1.0 - a);
  const QuadRule& r = gauss_jacobi01(order, -a);
  double s = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] / c.p_tilde(x * r.nodes[k]);
  return std::pow(x, 1.0 - a) * s;
}

/// H(s) = integral of 1/p over [s, 1].
inline double reciprocal_integral_to_one(const CoefficientPair& c, double s, int order = 40) {
  const double a = c.p_exponent;
  if (c.p_is_power_law()) {
    if (a == 1.0) return s > 0.0 ? -std::log(s) : HUGE_VAL;
    if (s <= 0.0) return a < 1.0 ? 1.0 / (1.0 - a) : HUGE_VAL;
    return (1.0 - std::pow(s, 1.0 - a)) / (1.0 - a);
  }
  if (s <= 0.0) {
    if (a < 1.0) return reciprocal_integral_from_zero(c, 1.0, order);
    return HUGE_VAL;
  }
  return detail::graded_integral([&](double x) { return 1.0 / c.p(x); }, s, 1.0, order);
}

/// Node samples of h for a Dirichlet-type coefficient p.
inline GridFunction build_h_numeric(const CoefficientPair& c, GridPtr grid) {
  return GridFunction::sample(grid, [&](double x) {
    const double a = c.p_exponent;
    if (!(a < 1.0)) throw Error(Errc::non_integrable_reciprocal, "1/p is not integrable at 0 (p exponent >= 1)");
    if (x <= 0.0) return 0.0;
    const QuadRule& r = gauss_jacobi01(grid->quad_order(), -a);
    double s = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] / c.p_tilde(x * r.nodes[k]);
    return std::pow(x, 1.0 - a) * s;
  });
}

}  // namespace oham
