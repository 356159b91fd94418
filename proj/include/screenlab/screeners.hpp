#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "screenlab/core.hpp"
#include "screenlab/sampling.hpp"

namespace screenlab {

// ---------------------------------------------------------------------------
// Marginal statistics. All take an arbitrary n x p matrix so they can run on
// basis-transformed designs; constant columns score 0.

/// |Pearson correlation(x_j, y)|.
Vector sis_scores(const Matrix& x, const Vector& y);

/// (1/n) sum_k [ (1/n) sum_i xs_ij 1{y_i < y_k} ]^2 with xs the column
/// standardised to mean 0, variance 1.
Vector sirs_scores(const Matrix& x, const Vector& y);

/// Empirical distance correlation between each column and y.
Vector dcsis_scores(const Matrix& x, const Vector& y);

/// Indices of the M largest scores, ties to the smaller index.
VariableSet top_m(const Vector& scores, std::size_t m);

// ---------------------------------------------------------------------------
// Lasso by cyclic coordinate descent on standardised columns.

struct LassoOptions {
  std::size_t n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  double tolerance = 1e-7;          // max standardised coefficient change
  std::size_t max_sweeps = 100000;  // per lambda
  std::size_t folds = 10;
  /// Fill a short CV active set up to M by marginal correlation.
  bool pad_to_m = true;
};

struct LassoFit {
  double lambda = 0.0;
  double intercept = 0.0;
  Vector coefficients;  // original column scale, length p
  VariableSet active;
};

/// max_j |xs_j'(y - ybar)| / n
double lasso_lambda_max(const Matrix& x, const Vector& y);

/// n_lambda log-spaced values from lambda_max down to lambda_min_ratio * lambda_max.
std::vector<double> lasso_grid(const Matrix& x, const Vector& y, const LassoOptions& options = {});

/// Warm-started path over a strictly decreasing grid. Throws NoConvergence.
std::vector<LassoFit> lasso_path(const Matrix& x, const Vector& y, std::span<const double> grid,
                                 const LassoOptions& options = {});

/// Largest KKT violation of a fit, measured on standardised columns:
/// active j: |g_j - lambda sign(b_j)|, inactive j: max(0, |g_j| - lambda),
/// where g_j = xs_j'(y - yhat) / n.
double lasso_kkt_violation(const Matrix& x, const Vector& y, const LassoFit& fit);

struct LassoCvResult {
  std::vector<double> grid;
  std::vector<double> cv_error;  // mean squared prediction error per lambda
  std::size_t best = 0;          // argmin of cv_error (first on ties)
  LassoFit fit;                  // full-data fit at grid[best]
};

/// K-fold cross-validation over the full-data grid. Fold membership comes
/// from a random permutation drawn from `stream`.
LassoCvResult lasso_cv(const Matrix& x, const Vector& y, std::size_t folds, SeededStream stream,
                       const LassoOptions& options = {});

/// Keeps the M largest |coefficient| variables of the CV fit; scores are
/// |coefficients|. With M >= p every variable is selected.
ScreeningOutcome lasso_screen(const Matrix& x, const Vector& y, std::size_t m, std::size_t folds,
                              SeededStream stream, const LassoOptions& options = {});
ScreeningOutcome lasso_outcome(const Matrix& x, const Vector& y, std::size_t m,
                               const LassoCvResult& cv, const LassoOptions& options = {});

// ---------------------------------------------------------------------------
// l0-constrained least squares.

struct FossOptions {
  /// Absolute RSS improvement a swap must exceed; the effective threshold is
  /// max(tolerance, 1e-12 * current RSS).
  double tolerance = 1e-10;
  std::size_t max_swaps = 100000;
};

struct FossResult {
  VariableSet selected;
  double rss = 0.0;
  double start_rss = 0.0;     // RSS of the init padded to M by marginal correlation
  std::size_t swaps = 0;
  std::vector<double> rss_trace;  // RSS after the starting fill and after each swap
};

/// Size-M subset from `init` by marginal-correlation trimming/padding, greedy
/// forward orthogonalisation, then best-improvement single swaps.
/// Requires |init| <= M < n (a larger init is trimmed by marginal correlation).
FossResult foss_solve(const Matrix& x, const Vector& y, std::size_t m, const VariableSet& init,
                      const FossOptions& options = {});

/// foss_solve wrapped as a ScreeningOutcome; scores are the RSS increase when
/// each selected variable is dropped (0 for unselected variables).
ScreeningOutcome foss_screen(const Matrix& x, const Vector& y, std::size_t m,
                             const VariableSet& init, const FossOptions& options = {});

/// init padded to M in marginal |correlation| order (trimmed if larger).
VariableSet pad_by_correlation(const Matrix& x, const Vector& y, const VariableSet& init,
                               std::size_t m);

/// Global minimiser of RSS over all size-M subsets, ties to the
/// lexicographically smallest. Requires C(p, M) <= 1e6.
VariableSet exhaustive_best_subset(const Matrix& x, const Vector& y, std::size_t m);

/// Binomial coefficient, saturating at SIZE_MAX.
std::size_t choose(std::size_t n, std::size_t k);

// ---------------------------------------------------------------------------

struct ScreenOptions {
  LassoOptions lasso;
  FossOptions foss;
};

/// Runs one screener. FOSS starts from the Lasso CV active set computed with
/// the same stream, so Lasso and FOSS see identical folds.
ScreeningOutcome screen(const Matrix& x, const Vector& y, std::size_t m, ScreenerId method,
                        const SeededStream& stream, const ScreenOptions& options = {});

/// Runs several screeners on the same data, sharing one Lasso CV between
/// L-Lasso and L-FOSS. Outcomes follow the order of `methods`.
std::vector<ScreeningOutcome> screen_all(const Matrix& x, const Vector& y, std::size_t m,
                                         std::span<const ScreenerId> methods,
                                         const SeededStream& stream, const ScreenOptions& options = {});

}  // namespace screenlab
