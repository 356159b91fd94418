#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "screenlab/bla.hpp"
#include "screenlab/core.hpp"
#include "screenlab/sampling.hpp"
#include "screenlab/screeners.hpp"

namespace screenlab {

/// Scalar map applied coordinate-wise before linear screening.
class BasisKind {
 public:
  static BasisKind linear();
  /// b(x) = -4x^2 + 4x - 2/3, orthogonal to 1 and x on [0, 1].
  static BasisKind quadratic();
  static BasisKind custom(std::function<double(double)> b);

  BasisTag tag() const { return tag_; }
  double operator()(double x) const;
  /// Integral of b over [0, 1]; exact for Linear and Quadratic.
  double mean() const;

 private:
  BasisKind(BasisTag tag, std::function<double(double)> b) : tag_(tag), b_(std::move(b)) {}

  BasisTag tag_;
  std::function<double(double)> b_;
};

/// Entry (i, j) becomes b(x_ij). Linear returns the matrix unchanged.
/// Throws NonFiniteBasisValue.
Matrix apply_basis(const Matrix& x, const BasisKind& b);
Matrix apply_basis(const DesignMatrix& x, const BasisKind& b);

/// Detectability margin of variable j (0-based) under basis b:
///   int b(x_j) f(x) dx - (int_0^1 b) (int f).
double general_bla_coefficient(const IntegrableFunction& f, std::size_t j, const BasisKind& b,
                               std::size_t n_quad);

enum class BasisPolicy { Linear, Quadratic, TwoStage };

BasisPolicy parse_basis_policy(std::string_view name);
std::string_view to_string(BasisPolicy policy);

/// Screens with the linear and the quadratic basis and keeps the stage whose
/// least-squares refit on its own transformed design has the smaller RSS. RSS
/// values within 1e-12 go to Linear with tie_broken set.
ScreeningOutcome two_stage_screen(const Matrix& x, const Vector& y, std::size_t m,
                                  ScreenerId method, const SeededStream& stream,
                                  const ScreenOptions& options = {});

/// As two_stage_screen but with explicit stage bases.
ScreeningOutcome two_stage_screen(const Matrix& x, const Vector& y, std::size_t m,
                                  ScreenerId method, const SeededStream& stream,
                                  const BasisKind& first, const BasisKind& second,
                                  const ScreenOptions& options = {});

/// One screening run under a basis policy.
ScreeningOutcome screen_with_policy(const Matrix& x, const Vector& y, std::size_t m,
                                    ScreenerId method, BasisPolicy policy,
                                    const SeededStream& stream, const ScreenOptions& options = {});

/// screen_all under a basis policy; two-stage picks per method.
std::vector<ScreeningOutcome> screen_all_with_policy(const Matrix& x, const Vector& y, std::size_t m,
                                                     std::span<const ScreenerId> methods,
                                                     BasisPolicy policy, const SeededStream& stream,
                                                     const ScreenOptions& options = {});

}  // namespace screenlab
