#pragma once

#include <cmath>
#include <optional>

#include "oham/expr.hpp"

namespace oham {

/// p(x) = x^a * p~(x) and q(x) = x^b * q~(x). The smooth factors are
/// expressions in x; an empty factor means identically 1.
struct CoefficientPair {
  double p_exponent = 0.0;
  std::optional<Expr> p_smooth;
  double q_exponent = 0.0;
  std::optional<Expr> q_smooth;

  bool p_is_power_law() const { return !p_smooth || p_smooth->is_constant(1.0); }
  bool q_is_power_law() const { return !q_smooth || q_smooth->is_constant(1.0); }

  double p_tilde(double x) const { return p_smooth ? p_smooth->eval(x, 0.0) : 1.0; }
  double q_tilde(double x) const { return q_smooth ? q_smooth->eval(x, 0.0) : 1.0; }
  double p(double x) const { return std::pow(x, p_exponent) * p_tilde(x); }
  double q(double x) const { return std::pow(x, q_exponent) * q_tilde(x); }

  friend bool operator==(const CoefficientPair& a, const CoefficientPair& b) {
    auto same = [](const std::optional<Expr>& u, const std::optional<Expr>& v) {
      const Expr one = Expr::constant(1.0);
      return u.value_or(one) == v.value_or(one);
    };
    return a.p_exponent == b.p_exponent && a.q_exponent == b.q_exponent && same(a.p_smooth, b.p_smooth) &&
           same(a.q_smooth, b.q_smooth);
  }
};

}  // namespace oham
