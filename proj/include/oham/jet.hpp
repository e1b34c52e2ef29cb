#pragma once

// Truncated power series in the embedding parameter r. A Jet of order M
// holds the coefficients of r^0 ... r^M of a quantity at one grid node.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oham/error.hpp"
#include "oham/expr.hpp"

namespace oham {

class Jet {
 public:
  Jet() = default;
  explicit Jet(std::size_t order, double c0 = 0.0) : c_(order + 1, 0.0) { c_[0] = c0; }
  explicit Jet(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

  /// Value of the truncated polynomial at r = eps.
  double eval(double eps) const {
    double v = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) v = v * eps + c_[k];
    return v;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    return a;
  }
  friend Jet operator-(Jet a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& v : a.c_) v *= s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet c(a.order());
    for (std::size_t k = 0; k < a.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a[j] * b[k - j];
      c[k] = s;
    }
    return c;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b[0] == 0.0) throw Error(Errc::domain_error, "series division by zero base coefficient");
    Jet c(a.order());
    for (std::size_t k = 0; k < a.size(); ++k) {
      double s = a[k];
      for (std::size_t j = 0; j < k; ++j) s -= c[j] * b[k - j];
      c[k] = s / b[0];
    }
    return c;
  }

 private:
  std::vector<double> c_;
};

inline Jet exp(const Jet& a) {
  Jet b(a.order());
  b[0] = std::exp(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * b[k - j];
    b[k] = s / static_cast<double>(k);
  }
  return b;
}

inline Jet log(const Jet& a) {
  if (!(a[0] > 0.0))
    throw Error(Errc::domain_error, "series log of non-positive base " + std::to_string(a[0]));
  Jet b(a.order());
  b[0] = std::log(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * b[j] * a[k - j];
    b[k] = (a[k] - s / static_cast<double>(k)) / a[0];
  }
  return b;
}

inline Jet pow(const Jet& a, double p) {
  // Integer exponents go through repeated squaring so a zero base is fine.
  if (p == std::round(p) && std::fabs(p) <= 64.0) {
    auto n = static_cast<long>(std::fabs(p));
    Jet result(a.order(), 1.0);
    Jet base = a;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return p < 0.0 ? Jet(a.order(), 1.0) / result : result;
  }
  if (!(a[0] > 0.0))
    throw Error(Errc::domain_error, "series power of non-positive base " + std::to_string(a[0]));
  Jet b(a.order());
  b[0] = std::pow(a[0], p);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      s += ((p + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a[j] * b[k - j];
    b[k] = s / (static_cast<double>(k) * a[0]);
  }
  return b;
}

/// Packs the component values y_0(x), ..., y_M(x) at one node.
inline Jet jet_lift(std::span<const double> values) { return Jet(std::vector<double>(values.begin(), values.end())); }

inline std::vector<double> jet_unpack(const Jet& j) { return j.coeffs(); }

namespace detail {

inline Jet compose(const Expr::Node& n, double x, const Jet& phi) {
  if (!n.has_y) return Jet(phi.order(), Expr::eval(n, x, phi[0]));
  switch (n.op) {
    case ExprOp::var_y: return phi;
    case ExprOp::neg: return -compose(*n.lhs, x, phi);
    case ExprOp::add: return compose(*n.lhs, x, phi) + compose(*n.rhs, x, phi);
    case ExprOp::sub: return compose(*n.lhs, x, phi) - compose(*n.rhs, x, phi);
    case ExprOp::mul:
      if (!n.lhs->has_y) return Expr::eval(*n.lhs, x, 0.0) * compose(*n.rhs, x, phi);
      if (!n.rhs->has_y) return Expr::eval(*n.rhs, x, 0.0) * compose(*n.lhs, x, phi);
      return compose(*n.lhs, x, phi) * compose(*n.rhs, x, phi);
    case ExprOp::div:
      if (!n.rhs->has_y) {
        const double d = Expr::eval(*n.rhs, x, 0.0);
        if (d == 0.0) throw Error(Errc::domain_error, "division by zero");
        return (1.0 / d) * compose(*n.lhs, x, phi);
      }
      return compose(*n.lhs, x, phi) / compose(*n.rhs, x, phi);
    case ExprOp::exp: return exp(compose(*n.lhs, x, phi));
    case ExprOp::log: return log(compose(*n.lhs, x, phi));
    case ExprOp::pow: return pow(compose(*n.lhs, x, phi), n.value);
    default: return Jet(phi.order());
  }
}

}  // namespace detail

/// Jet of f(x, phi(x; r)). Coefficient k is the homotopy derivative D_k of f
/// at this node. Subtrees that do not involve y are evaluated as scalars, so
/// factors like x^b with b < 0 never enter the series arithmetic.
inline Jet jet_compose(const Expr& f, double x, const Jet& phi) {
  if (!f.depends_on_y()) return Jet(phi.order(), f.eval(x, phi[0]));
  return detail::compose(f.node(), x, phi);
}

inline Jet jet_compose(const NonlinearityRule& rule, double x, const Jet& phi) {
  return jet_compose(rule.expr(), x, phi);
}

}  // namespace oham
