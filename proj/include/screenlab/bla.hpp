#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "screenlab/core.hpp"

namespace screenlab {

/// A deterministic map [0,1)^dim -> R.
struct IntegrableFunction {
  std::size_t dim = 1;
  std::function<double(std::span<const double>)> eval;
};

/// Best linear approximation intercept + coefficients' x of a function under
/// the uniform measure on the unit cube.
struct BlaResult {
  double intercept = 0.0;
  Vector coefficients;
  std::size_t quadrature_points = 0;
  double integral = 0.0;  // quadrature estimate of the integral of f
  /// margins[j] = int x_j f - 0.5 int f; coefficients[j] == 12 * margins[j].
  Vector margins;
};

/// Node set and equal weights used to approximate integrals over [0,1)^dim.
///
/// dim <= 3: tensor midpoint rule with ceil(n_quad^(1/dim)) nodes per axis.
/// dim >= 4: digitally shifted Sobol' points, at least 2^16 and a power of 2.
class Quadrature {
 public:
  Quadrature(std::size_t dim, std::size_t n_quad);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return size_; }
  /// Calls visit(point) for every node in a fixed order.
  void for_each(const std::function<void(std::span<const double>)>& visit) const;

 private:
  std::size_t dim_;
  std::size_t per_axis_ = 0;
  std::size_t size_;
};

/// Closed-form BLA: beta_j = 12 (int x_j f - 0.5 int f), beta_0 = int f - sum beta_j / 2.
/// Requires n_quad >= 1024. Throws NonFiniteEvaluation.
BlaResult bla_closed_form(const IntegrableFunction& f, std::size_t n_quad);

/// min over `active` of |int x_j f - 0.5 int f|, read off a BlaResult.
double bla_margin(const BlaResult& bla, const VariableSet& active);

/// Exact inverse of the (m+1)x(m+1) moment matrix of (1, x_1, ..., x_m) under
/// the uniform measure:
///   12 * [[(1+3m)/12, -1/2 ...], [-1/2, I]].
Matrix precision_inverse(std::size_t m);
/// The moment matrix itself: 1 / (1/2) on the border, 1/3 on the diagonal,
/// 1/4 off the diagonal.
Matrix moment_matrix(std::size_t m);

/// Least squares of y on an intercept and the columns `subset` of x.
/// Solves the bordered normal equations with an SVD. Throws SubsetTooLarge when
/// |subset| >= n and SingularGram when sigma_min < 1e-10 sigma_max.
SubsetModel ls_fit(const Matrix& x, const Vector& y, const VariableSet& subset);
SubsetModel ls_fit(const DesignMatrix& x, const ResponseVector& y, const VariableSet& subset);

double rss(const Matrix& x, const Vector& y, const VariableSet& subset);
double rss(const DesignMatrix& x, const ResponseVector& y, const VariableSet& subset);

/// `count` points of a digitally shifted Sobol' sequence in [0,1)^dim. The
/// shift is drawn from `scramble_seed`, so output is deterministic.
Matrix low_discrepancy_points(std::size_t count, std::size_t dim, std::uint64_t scramble_seed);

}  // namespace screenlab
