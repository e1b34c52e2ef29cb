#pragma once

// Gauss rules on [0,1]: Legendre, and Jacobi with weight t^e (e > -1).
// Nodes come from the Golub-Welsch eigenproblem and are polished by Newton
// iteration on the orthonormal recurrence; weights are Christoffel numbers.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "oham/error.hpp"

namespace oham {

struct QuadRule {
  std::vector<double> nodes;    // ascending in [0,1]
  std::vector<double> weights;
};

namespace detail {

// Orthonormal Jacobi recurrence for weight (1-x)^a (1+x)^b on [-1,1].
struct JacobiRecurrence {
  std::vector<double> diag, off;  // off[k] couples p_k and p_{k+1}
  double mu0 = 0.0;

  JacobiRecurrence(int n, double a, double b) : diag(n), off(n) {
    const double ab = a + b;
    mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                   std::lgamma(ab + 2.0));
    for (int k = 0; k < n; ++k) {
      const double s = 2.0 * k + ab;
      if (k == 0)
        diag[k] = (b - a) / (ab + 2.0);
      else
        diag[k] = (b * b - a * a) / (s * (s + 2.0));
      const double k1 = k + 1.0, s1 = 2.0 * k1 + ab;
      off[k] = std::sqrt(4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)));
    }
  }

  // Returns p_n(x), p_n'(x) and sum_{k<n} p_k(x)^2.
  std::tuple<double, double, double> eval(int n, double x) const {
    double pm = 0.0, p = 1.0 / std::sqrt(mu0);
    double dpm = 0.0, dp = 0.0, sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += p * p;
      const double pn = ((x - diag[k]) * p - (k > 0 ? off[k - 1] : 0.0) * pm) / off[k];
      const double dpn = (p + (x - diag[k]) * dp - (k > 0 ? off[k - 1] : 0.0) * dpm) / off[k];
      pm = p;
      p = pn;
      dpm = dp;
      dp = dpn;
    }
    return {p, dp, sum};
  }
};

inline QuadRule gauss_jacobi_pm1(int n, double a, double b) {
  if (n < 1) throw Error(Errc::invalid_argument, "quadrature order must be positive");
  if (!(a > -1.0) || !(b > -1.0)) throw Error(Errc::quadrature_divergence, "Jacobi exponent must exceed -1");
  JacobiRecurrence rec(n, a, b);
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(rec.diag.data(), n);
  Eigen::VectorXd e = n > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(rec.off.data(), n - 1))
                            : Eigen::VectorXd(0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      auto [p, dp, s] = rec.eval(n, x);
      if (dp == 0.0) break;
      const double step = p / dp;
      x -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    auto [p, dp, sum] = rec.eval(n, x);
    r.nodes[i] = x;
    r.weights[i] = 1.0 / sum;
  }
  return r;
}

}  // namespace detail

/// Gauss-Jacobi rule on [0,1] exact for t^e * poly(t) of degree 2n-1.
inline QuadRule gauss_jacobi01(int n, double e) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, QuadRule> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({n, e}); it != cache.end()) return it->second;
  }
  QuadRule r = detail::gauss_jacobi_pm1(n, 0.0, e);
  const double scale = std::pow(2.0, -(e + 1.0));
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
    r.weights[i] *= scale;
  }
  std::lock_guard lock(mu);
  return cache.emplace(std::pair{n, e}, std::move(r)).first->second;
}

inline QuadRule gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0); }

}  // namespace oham
