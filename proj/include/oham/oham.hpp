#pragma once

#include "oham/bvp.hpp"
#include "oham/coefficients.hpp"
#include "oham/context.hpp"
#include "oham/diagnostics.hpp"
#include "oham/error.hpp"
#include "oham/expr.hpp"
#include "oham/fredholm.hpp"
#include "oham/grid.hpp"
#include "oham/homotopy.hpp"
#include "oham/jet.hpp"
#include "oham/kernel.hpp"
#include "oham/optimizer.hpp"
#include "oham/parallel.hpp"
#include "oham/problems.hpp"
#include "oham/quadrature.hpp"
#include "oham/report.hpp"
