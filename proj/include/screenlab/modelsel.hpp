#pragma once

#include <cstddef>
#include <vector>

#include "screenlab/core.hpp"
#include "screenlab/sampling.hpp"
#include "screenlab/screeners.hpp"

namespace screenlab {

/// round(n / ln n) clamped to [1, n - 2]. Requires n >= 3.
std::size_t default_m(std::size_t n);

enum class SubsetSolver { FOSS, Exhaustive };

/// GCV(M) = best size-M RSS / (n (1 - M/n)^2). `init` seeds the FOSS solver.
double gcv(const Matrix& x, const Vector& y, std::size_t m, SubsetSolver solver = SubsetSolver::FOSS,
           const VariableSet& init = {});

/// Plain arithmetic form used by gcv().
double gcv_value(double rss, std::size_t n, std::size_t m);

struct MSelection {
  std::size_t m = 0;
  std::size_t lower = 0;  // inclusive search interval
  std::size_t upper = 0;
  std::vector<double> gcv_curve;  // gcv_curve[k] is GCV(lower + k)
  VariableSet selected;           // solver's subset at the chosen M
  double gcv = 0.0;
};

struct SelectMOptions {
  SubsetSolver solver = SubsetSolver::FOSS;
  /// Starting subset for the smallest M; larger M are warm-started from the
  /// previous solution.
  VariableSet init;
  FossOptions foss;
};

/// Minimises GCV over the integers between m0 and default_m(n), inclusive,
/// ties to the smaller M; values within 1e-12 * TSS / n count as ties. A
/// degenerate interval returns its single value without searching.
MSelection select_m(const Matrix& x, const Vector& y, std::size_t m0,
                    const SelectMOptions& options = {});

/// Runs Lasso CV with `stream` to obtain M0 (active-set size, at least 1) and
/// the FOSS starting subset, then calls select_m.
MSelection select_m(const Matrix& x, const Vector& y, const SeededStream& stream,
                    const ScreenOptions& options = {});

}  // namespace screenlab
