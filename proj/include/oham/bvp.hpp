#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "oham/coefficients.hpp"
#include "oham/error.hpp"
#include "oham/expr.hpp"
#include "oham/kernel.hpp"

namespace oham {

/// MinusDivForm: -(p y')' = q f.  PlusDivForm: (p y')' = q f.
enum class SignConvention { MinusDivForm, PlusDivForm };

struct SingularBVP {
  CoefficientPair coeffs;
  BoundaryConditions bc;
  NonlinearityRule f;
  SignConvention sign = SignConvention::MinusDivForm;
  /// y_0 for the homotopy; the source term g when absent.
  std::optional<Expr> initial_guess;

  /// f~ with y = g + int G q f~, i.e. f for the minus form and -f otherwise.
  NonlinearityRule normalized_rule() const {
    return sign == SignConvention::MinusDivForm ? f : NonlinearityRule(-f.expr());
  }

  friend bool operator==(const SingularBVP& a, const SingularBVP& b) {
    const bool guess = a.initial_guess.has_value() == b.initial_guess.has_value() &&
                       (!a.initial_guess || *a.initial_guess == *b.initial_guess);
    return a.coeffs == b.coeffs && a.bc == b.bc && a.f == b.f && a.sign == b.sign && guess;
  }
};

/// Checks the structural conditions on p, q and the boundary data. Hard
/// violations throw; soft ones come back as warnings.
inline std::vector<std::string> validate(const SingularBVP& bvp) {
  std::vector<std::string> warnings;
  const CoefficientPair& c = bvp.coeffs;
  const double a = c.p_exponent, b = c.q_exponent;
  if (!std::isfinite(a) || !std::isfinite(b)) throw Error(Errc::validation_error, "coefficient exponents must be finite");
  if (a < 0.0) throw Error(Errc::validation_error, "p exponent must be non-negative");
  if (!(b > -1.0)) throw Error(Errc::quadrature_divergence, "q exponent must exceed -1 so that q is integrable");
  if (bvp.bc.family == BcFamily::DirichletRobin && !(a < 1.0))
    throw Error(Errc::non_integrable_reciprocal, "Dirichlet data at 0 needs p exponent < 1");
  if (bvp.bc.family == BcFamily::NeumannRobin && bvp.bc.alpha == 0.0)
    throw Error(Errc::zero_alpha, "Robin coefficient alpha must be nonzero");

  for (int j = 0; j <= 200; ++j) {
    const double x = j / 200.0;
    double pv = 0.0, qv = 0.0;
    try {
      pv = c.p_tilde(x);
      qv = j > 0 ? c.q_tilde(x) : 1.0;
    } catch (const Error&) {
      throw Error(Errc::validation_error, "smooth factor of p or q is undefined at x = " + std::to_string(x));
    }
    if (!(pv > 0.0) || !std::isfinite(pv))
      throw Error(Errc::validation_error, "p must be positive on [0,1]; smooth factor is " + std::to_string(pv) +
                                              " at x = " + std::to_string(x));
    if (!(qv > 0.0) || !std::isfinite(qv))
      throw Error(Errc::validation_error, "q must be positive on (0,1]; smooth factor is " + std::to_string(qv) +
                                              " at x = " + std::to_string(x));
  }

  // Flux integrability: int_0^1 (1/p) int q stays finite. With Dirichlet
  // data this reduces to a < 1; with a flux condition at 0 it needs
  // int_0^1 x^(b+1-a) dx < infinity.
  if (bvp.bc.family == BcFamily::NeumannRobin && !(b - a + 2.0 > 0.0))
    warnings.push_back("int (1/p) int_0^x q diverges (q exponent - p exponent <= -2); the solution may be unbounded");
  return warnings;
}

}  // namespace oham
