#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oham/oham.hpp"

using namespace oham;

namespace {

CoefficientPair power_law(double a, double b) { return {a, std::nullopt, b, std::nullopt}; }

GreensKernel p1_kernel() {
  return build_kernel(power_law(0.5, -0.5), {BcFamily::DirichletRobin, std::log(0.25), 1.0, 0.0, std::log(0.2)});
}

GreensKernel p3_kernel() { return build_kernel(power_law(2.0, 2.0), {BcFamily::NeumannRobin, 0.0, 1.0, 1.0, 0.0}); }

}  // namespace

TEST(Kernel, DirichletSqrtClosedForms) {
  const GreensKernel k = p1_kernel();
  EXPECT_NEAR(k.mu(), 2.0, 1e-14);
  for (double x : {0.0, 0.01, 0.3, 0.77, 1.0}) {
    EXPECT_NEAR(k.h(x), 2.0 * std::sqrt(x), 1e-14);
    EXPECT_NEAR(eval_g(k, x), std::log(0.25) + std::log(0.8) * std::sqrt(x), 1e-14);
  }
  EXPECT_NEAR(eval_G(k, 1.0, 1.0), 0.0, 1e-14);
  EXPECT_NEAR(eval_g(k, 0.0), -1.386294361, 1e-9);
  EXPECT_NEAR(eval_g(k, 1.0), -1.609437912, 1e-9);
}

TEST(Kernel, DirichletVanishesAtOrigin) {
  const GreensKernel k = p1_kernel();
  for (double s : {0.0, 0.2, 0.5, 1.0}) EXPECT_EQ(eval_G(k, 0.0, s), 0.0);
}

TEST(Kernel, NeumannInverseSquare) {
  const GreensKernel k = p3_kernel();
  EXPECT_NEAR(k.H(0.25), 3.0, 1e-13);
  EXPECT_NEAR(k.hp1(), 1.0, 1e-15);
  EXPECT_NEAR(eval_G(k, 0.5, 0.25), 2.0, 1e-13);
  EXPECT_NEAR(eval_G(k, 0.25, 0.5), 2.0, 1e-13);
  EXPECT_NEAR(eval_G(k, 0.3, 0.7), 1.0 / 0.7, 1e-13);
  for (double x : {0.0, 0.4, 1.0}) EXPECT_EQ(eval_g(k, x), 0.0);
}

TEST(Kernel, NumericReciprocalIntegrals) {
  CoefficientPair c = power_law(0.5, 0.0);
  c.p_smooth = parse_expr("1 + x");
  const GreensKernel k = build_kernel(c, {BcFamily::DirichletRobin, 0.0, 1.0, 0.0, 1.0});
  // int_0^x ds / (sqrt(s)(1+s)) = 2 atan(sqrt(x))
  for (double x : {0.001, 0.2, 0.9}) EXPECT_NEAR(k.h(x), 2.0 * std::atan(std::sqrt(x)), 1e-13);

  CoefficientPair d = power_law(2.0, 2.0);
  d.p_smooth = parse_expr("1 + x");
  const GreensKernel kn = build_kernel(d, {BcFamily::NeumannRobin, 0.0, 1.0, 0.0, 0.0});
  // int_s^1 dx / (x^2 (1+x)) by partial fractions
  for (double s : {0.05, 0.3, 0.8}) {
    const double exact = 1.0 / s - 1.0 + std::log(s / (1.0 + s)) - std::log(0.5);
    EXPECT_NEAR(kn.H(s), exact, 1e-12);
  }
}

TEST(Kernel, SymmetryOverRandomPairs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoefficientPair smooth = power_law(0.4, 0.2);
  smooth.p_smooth = parse_expr("2 + x^2");
  const std::vector<GreensKernel> kernels{
      p1_kernel(), p3_kernel(),
      build_kernel(power_law(1.0, 1.0), {BcFamily::NeumannRobin, 0.0, 2.0, 1.0, 0.0}),
      build_kernel(smooth, {BcFamily::DirichletRobin, 0.3, 1.5, 0.7, -0.2})};
  for (const GreensKernel& k : kernels)
    for (int j = 0; j < 1000; ++j) {
      const double x = u(rng), s = u(rng);
      const double a = eval_G(k, x, s), b = eval_G(k, s, x);
      EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(a)));
    }
}

TEST(Kernel, BoundaryConditionsOfG) {
  // Dirichlet-Robin: G(0,s) = 0 and alpha G(1,s) + beta p(1) dG/dx(1,s) = 0.
  const GreensKernel k = build_kernel(power_law(0.5, 0.0), {BcFamily::DirichletRobin, 0.0, 2.0, 1.0, 0.0});
  for (double s : {0.1, 0.5, 0.9}) {
    EXPECT_EQ(eval_G(k, 0.0, s), 0.0);
    EXPECT_NEAR(2.0 * k.G(1.0, s) + 1.0 * k.dG_dx(1.0, s), 0.0, 1e-13);
  }
  // Neumann-Robin: p G_x -> 0 at 0, and alpha G(1,s) + beta p(1) G_x(1,s) = 0.
  const GreensKernel n = build_kernel(power_law(2.0, 2.0), {BcFamily::NeumannRobin, 0.0, 5.0, 1.0, 5.0});
  for (double s : {0.1, 0.5, 0.9}) {
    EXPECT_EQ(n.dG_dx(0.05, s), 0.0);
    EXPECT_NEAR(5.0 * n.G(1.0, s) + 1.0 * n.dG_dx(1.0, s), 0.0, 1e-13);
  }
  EXPECT_NEAR(5.0 * n.g(1.0) + n.g_prime(1.0), 5.0, 1e-14);
}

TEST(Kernel, ValidationErrors) {
  try {
    build_kernel(power_law(1.5, 0.0), {BcFamily::DirichletRobin, 0.0, 1.0, 0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_integrable_reciprocal);
  }
  try {
    build_kernel(power_law(2.0, 2.0), {BcFamily::NeumannRobin, 0.0, 0.0, 1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_alpha);
  }
  // alpha h(1) + beta/p(1) = 2 - 2 = 0
  try {
    build_kernel(power_law(0.5, 0.0), {BcFamily::DirichletRobin, 0.0, 1.0, -2.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_mu);
  }
  EXPECT_THROW(eval_G(p1_kernel(), 1.5, 0.2), Error);
  EXPECT_THROW(eval_g(p1_kernel(), -0.1), Error);
}

TEST(Fredholm, ClosedFormOnInverseSquareKernel) {
  const GreensKernel k = p3_kernel();
  auto grid = std::make_shared<const CollocationGrid>(64, 40, 1);
  const FredholmOperator op(k, grid);
  const GridFunction one = GridFunction::sample(grid, [](double) { return 1.0; });
  const GridFunction r = fredholm_apply(op, one);
  for (int i = 0; i < grid->size(); ++i) {
    const double x = grid->nodes()[i];
    EXPECT_NEAR(r.values[i], x * x / 3.0 + (1.0 - x * x) / 2.0, 1e-13);
  }
  EXPECT_NEAR(r(0.5), 0.4583333333333333, 1e-12);
  EXPECT_NEAR(op.max_abs_mass(), 0.5, 1e-13);
  const GridFunction zero = GridFunction::sample(grid, [](double) { return 0.0; });
  EXPECT_EQ(fredholm_apply(op, zero).values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Fredholm, Linearity) {
  const GreensKernel k = p1_kernel();
  auto grid = std::make_shared<const CollocationGrid>(48, 40, 2);
  const FredholmOperator op(k, grid);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd a(grid->size()), b(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    const double s = u(rng), t = u(rng);
    const Eigen::VectorXd lhs = op.apply(Eigen::VectorXd(s * a + t * b));
    const Eigen::VectorXd rhs = s * op.apply(a) + t * op.apply(b);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Fredholm, RejectsNonIntegrableWeight) {
  auto grid = std::make_shared<const CollocationGrid>(16, 10, 1);
  CoefficientPair c = power_law(0.0, -0.5);
  const GreensKernel k = build_kernel(c, {BcFamily::DirichletRobin, 0.0, 1.0, 0.0, 0.0});
  c.q_exponent = -1.0;
  const GreensKernel bad = build_kernel(c, {BcFamily::DirichletRobin, 0.0, 1.0, 0.0, 0.0});
  EXPECT_NO_THROW(FredholmOperator(k, grid));
  try {
    FredholmOperator op(bad, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::quadrature_divergence);
  }
}
