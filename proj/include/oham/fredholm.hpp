#pragma once

// The integral operator (K w)(x_i) = int_0^1 G(x_i, s) q(s) w~(s) ds, where
// w~ interpolates node samples w. K is assembled once per (kernel, grid) as
// a dense matrix so that every later application is a fixed-order product.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "oham/coefficients.hpp"
#include "oham/error.hpp"
#include "oham/grid.hpp"
#include "oham/kernel.hpp"
#include "oham/parallel.hpp"
#include "oham/quadrature.hpp"

namespace oham {

class FredholmOperator {
 public:
  FredholmOperator(const GreensKernel& kernel, GridPtr grid, std::size_t workers = worker_count())
      : grid_(std::move(grid)) {
    const CoefficientPair& c = kernel.coefficients();
    if (!(c.q_exponent > -1.0))
      throw Error(Errc::quadrature_divergence, "q is not integrable at 0 (q exponent <= -1)");
    const int n = grid_->size();
    const int order = grid_->quad_order();
    const double kappa = grid_->stretch();
    const double e = kappa * (c.q_exponent + 1.0) - 1.0;
    const bool jacobi = e > -1.0 && e < 0.0;
    const QuadRule gl = gauss_legendre01(order);
    const QuadRule gj = jacobi ? gauss_jacobi01(order, e) : gl;

    matrix_.setZero(n, n);
    mass_.setZero(n);
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t row) {
          const int i = static_cast<int>(row);
          const double xi = grid_->nodes()[i];
          const double ti = grid_->t_nodes()[i];
          std::vector<double> cuts{0.0, 1.0};
          if (ti > 0.0 && ti < 1.0) cuts.push_back(ti);
          for (int k = 1; k <= 12; ++k) cuts.push_back(std::ldexp(1.0, -2 * k));
          std::sort(cuts.begin(), cuts.end());
          cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

          Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n);
          double mass = 0.0;
          for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double lo = cuts[p], hi = cuts[p + 1], len = hi - lo;
            const bool weighted = jacobi && lo == 0.0;
            const QuadRule& rule = weighted ? gj : gl;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
              const double t = lo + len * rule.nodes[k];
              const double s = grid_->to_x(t);
              double w = weighted ? rule.weights[k] * std::pow(len, e + 1.0)
                                  : rule.weights[k] * len * std::pow(t, e);
              w *= kappa * c.q_tilde(s) * kernel.G(xi, s);
              mass += std::fabs(w);
              acc += w * grid_->basis_t(t);
            }
          }
          matrix_.row(i) = acc;
          mass_[i] = mass;
        },
        workers);
  }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const GridPtr& grid() const { return grid_; }

  /// Node values of int |G(x_i,s) q(s)| ds.
  const Eigen::VectorXd& abs_mass() const { return mass_; }
  double max_abs_mass() const { return mass_.maxCoeff(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& w) const { return matrix_ * w; }
  GridFunction apply(const GridFunction& w) const { return {grid_, matrix_ * w.values}; }

 private:
  GridPtr grid_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd mass_;
};

inline GridFunction fredholm_apply(const FredholmOperator& op, const GridFunction& w) { return op.apply(w); }

}  // namespace oham
