#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oham/bvp.hpp"
#include "oham/fredholm.hpp"
#include "oham/grid.hpp"
#include "oham/kernel.hpp"
#include "oham/parallel.hpp"

namespace oham {

/// Everything a solve needs, built once per (problem, grid options).
struct SolveContext {
  SingularBVP bvp;
  GridPtr grid;
  GreensKernel kernel;
  FredholmOperator op;
  NonlinearityRule rule;  // normalized: y = g + K rule(y)
  GridFunction g;
  GridFunction y0;
  std::vector<std::string> warnings;
};

using ContextPtr = std::shared_ptr<const SolveContext>;

inline ContextPtr make_context(const SingularBVP& bvp, const GridOptions& opts = {},
                               std::size_t workers = worker_count()) {
  std::vector<std::string> warnings = validate(bvp);
  const int stretch = opts.stretch > 0 ? opts.stretch : auto_stretch(bvp.coeffs.p_exponent);
  auto grid = std::make_shared<const CollocationGrid>(opts.n_nodes, opts.quad_order, stretch);
  GreensKernel kernel = build_kernel(bvp.coeffs, bvp.bc, opts.quad_order);
  FredholmOperator op(kernel, grid, workers);
  GridFunction g = GridFunction::sample(grid, [&](double x) { return kernel.g(x); });
  GridFunction y0 = bvp.initial_guess
                        ? GridFunction::sample(grid, [&](double x) { return bvp.initial_guess->eval(x, 0.0); })
                        : g;
  return std::make_shared<const SolveContext>(SolveContext{bvp, grid, std::move(kernel), std::move(op),
                                                           bvp.normalized_rule(), std::move(g), std::move(y0),
                                                           std::move(warnings)});
}

}  // namespace oham
