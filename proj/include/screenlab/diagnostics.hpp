#pragma once

#include <cstddef>

#include "screenlab/bla.hpp"
#include "screenlab/core.hpp"
#include "screenlab/sampling.hpp"

namespace screenlab {

/// Exact L-infinity star discrepancy of m points in [0,1)^d (rows are
/// points): the supremum over anchored boxes [0, x) and [0, x] of
/// |fraction of points inside - volume|. Limited to d <= 3 and m <= 200;
/// throws TooLarge beyond that.
double star_discrepancy(const Matrix& points);

/// Pick-freeze Monte Carlo estimate of the first-order Sobol' indices
/// Var(E[f | x_j]) / Var(f) for independent Uniform[0,1) inputs, using two
/// independent N x dim sample matrices. Each estimate is clamped to [0, 1].
/// Requires N >= 1024; throws ZeroVariance when Var(f) < 1e-14.
Vector sobol_first_order(const IntegrableFunction& f, std::size_t samples, SeededStream& stream);

}  // namespace screenlab
