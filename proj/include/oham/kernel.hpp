#pragma once

// Source term g and Green's kernel G for -(p y')' = q f on (0,1] with
//   DirichletRobin: y(0) = delta1,  alpha y(1) + beta y'(1) = gamma
//   NeumannRobin:   p y' -> 0 at 0, alpha y(1) + beta y'(1) = gamma
// so that y = g + int_0^1 G(x,s) q(s) f(s, y(s)) ds.

#include <algorithm>
#include <cmath>
#include <string>

#include "oham/coefficients.hpp"
#include "oham/error.hpp"
#include "oham/grid.hpp"

namespace oham {

enum class BcFamily { DirichletRobin, NeumannRobin };

inline const char* family_name(BcFamily f) {
  return f == BcFamily::DirichletRobin ? "dirichlet-robin" : "neumann-robin";
}

struct BoundaryConditions {
  BcFamily family = BcFamily::DirichletRobin;
  double delta1 = 0.0;  // Dirichlet value at 0; ignored for NeumannRobin
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;

  friend bool operator==(const BoundaryConditions& a, const BoundaryConditions& b) {
    const bool d = a.family == BcFamily::NeumannRobin || a.delta1 == b.delta1;
    return a.family == b.family && d && a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma;
  }
};

class GreensKernel {
 public:
  GreensKernel(CoefficientPair coeffs, BoundaryConditions bc, int quad_order = 40)
      : coeffs_(std::move(coeffs)), bc_(bc), order_(quad_order) {
    const double p1 = coeffs_.p(1.0);
    if (!(p1 > 0.0) || !std::isfinite(p1)) throw Error(Errc::validation_error, "p(1) must be positive");
    hp1_ = 1.0 / p1;
    if (bc_.family == BcFamily::DirichletRobin) {
      if (!(coeffs_.p_exponent < 1.0))
        throw Error(Errc::non_integrable_reciprocal,
                    "Dirichlet data at 0 needs 1/p integrable, got p exponent " + std::to_string(coeffs_.p_exponent));
      h1_ = h(1.0);
      mu_ = bc_.alpha * h1_ + bc_.beta * hp1_;
      const double scale = std::fabs(bc_.alpha * h1_) + std::fabs(bc_.beta * hp1_);
      if (mu_ == 0.0 || std::fabs(mu_) <= 1e-14 * scale) throw Error(Errc::zero_mu, "alpha*h(1) + beta*h'(1) vanishes");
      slope_ = (bc_.gamma - bc_.delta1 * bc_.alpha) / mu_;
    } else {
      if (bc_.alpha == 0.0) throw Error(Errc::zero_alpha, "Robin coefficient alpha must be nonzero");
      shift_ = (bc_.beta / bc_.alpha) * hp1_;
    }
  }

  const BoundaryConditions& bc() const { return bc_; }
  const CoefficientPair& coefficients() const { return coeffs_; }
  BcFamily family() const { return bc_.family; }
  double mu() const { return mu_; }
  double hp1() const { return hp1_; }

  /// h(x) = int_0^x ds/p(s) (DirichletRobin).
  double h(double x) const { return reciprocal_integral_from_zero(coeffs_, x, order_); }
  /// H(s) = int_s^1 dx/p(x) (NeumannRobin).
  double H(double s) const { return reciprocal_integral_to_one(coeffs_, s, order_); }

  double g(double x) const {
    if (bc_.family == BcFamily::NeumannRobin) return bc_.gamma / bc_.alpha;
    return bc_.delta1 + slope_ * h(x);
  }

  double g_prime(double x) const {
    if (bc_.family == BcFamily::NeumannRobin) return 0.0;
    return slope_ / coeffs_.p(x);
  }

  double G(double x, double s) const {
    const double lo = std::min(x, s), hi = std::max(x, s);
    if (bc_.family == BcFamily::DirichletRobin) return h(lo) * (1.0 - bc_.alpha * h(hi) / mu_);
    return H(hi) + shift_;
  }

  /// Closed-form x-derivative of G; the branch x >= s is used on the diagonal.
  double dG_dx(double x, double s) const {
    const double dh = 1.0 / coeffs_.p(x);
    if (bc_.family == BcFamily::DirichletRobin) {
      if (x < s) return dh * (1.0 - bc_.alpha * h(s) / mu_);
      return -h(s) * bc_.alpha * dh / mu_;
    }
    return x < s ? 0.0 : -dh;
  }

 private:
  CoefficientPair coeffs_;
  BoundaryConditions bc_;
  int order_;
  double hp1_ = 0.0;
  double h1_ = 0.0;
  double mu_ = 0.0;
  double slope_ = 0.0;
  double shift_ = 0.0;
};

inline GreensKernel build_kernel(const CoefficientPair& pq, const BoundaryConditions& bc, int quad_order = 40) {
  return GreensKernel(pq, bc, quad_order);
}

inline double eval_G(const GreensKernel& k, double x, double s) {
  if (!(x >= 0.0 && x <= 1.0) || !(s >= 0.0 && s <= 1.0))
    throw Error(Errc::domain_error, "kernel arguments must lie in [0,1]");
  const double v = k.G(x, s);
  if (!std::isfinite(v)) throw Error(Errc::domain_error, "kernel is unbounded at this point");
  return v;
}

inline double eval_g(const GreensKernel& k, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::domain_error, "source term argument must lie in [0,1]");
  return k.g(x);
}

}  // namespace oham
