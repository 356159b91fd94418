#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "screenlab/screeners.hpp"

namespace screenlab {

namespace {

// Columns centred and scaled so that xs_j'xs_j / n = 1; constant columns are
// flagged unusable and never enter the model.
struct Standardized {
  Matrix xs;
  Vector mean;
  Vector scale;
  std::vector<char> usable;
  Vector yc;
  double ymean = 0.0;
};

Standardized standardize(const Matrix& x, const Vector& y) {
  Standardized s;
  const double n = static_cast<double>(x.rows());
  s.mean = x.colwise().mean().transpose();
  s.xs = x.rowwise() - s.mean.transpose();
  s.scale.resize(x.cols());
  s.usable.assign(static_cast<std::size_t>(x.cols()), 1);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double ss = s.xs.col(j).squaredNorm();
    if (ss <= 1e-24 * std::max(1.0, x.col(j).squaredNorm())) {
      s.usable[static_cast<std::size_t>(j)] = 0;
      s.scale[j] = 1.0;
      s.xs.col(j).setZero();
      continue;
    }
    s.scale[j] = std::sqrt(ss / n);
    s.xs.col(j) /= s.scale[j];
  }
  s.ymean = y.mean();
  s.yc = y.array() - s.ymean;
  return s;
}

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

// Coordinate descent state for one standardised problem.
class CoordinateDescent {
 public:
  CoordinateDescent(const Standardized& s, const LassoOptions& options)
      : s_(s),
        options_(options),
        n_(static_cast<double>(s.xs.rows())),
        beta_(Vector::Zero(s.xs.cols())),
        resid_(s.yc),
        corr_(s.xs.transpose() * s.yc / n_),
        gram_(s.xs.cols(), 0),
        cached_(static_cast<std::size_t>(s.xs.cols()), 0) {}

  void solve(double lambda) {
    std::size_t sweeps = 0;
    for (;;) {
      const double full_change = sweep(lambda, /*active_only=*/false);
      if (++sweeps > options_.max_sweeps) throw NoConvergence(lambda);
      if (full_change < options_.tolerance) return;
      for (std::size_t inner = 1;; ++inner) {
        const double change = sweep(lambda, /*active_only=*/true);
        if (++sweeps > options_.max_sweeps) throw NoConvergence(lambda);
        if (change < options_.tolerance) break;
        if (inner >= kPolishAfter && (inner & (inner - 1)) == 0) polish(lambda);
      }
    }
  }

  const Vector& beta() const { return beta_; }

  LassoFit fit(double lambda) const {
    LassoFit out;
    out.lambda = lambda;
    out.coefficients = beta_.array() / s_.scale.array();
    out.intercept = s_.ymean - out.coefficients.dot(s_.mean);
    std::vector<std::size_t> active;
    for (Eigen::Index j = 0; j < beta_.size(); ++j)
      if (beta_[j] != 0.0) active.push_back(static_cast<std::size_t>(j));
    out.active = VariableSet(std::move(active));
    return out;
  }

 private:
  double sweep(double lambda, bool active_only) {
    double max_change = 0.0;
    const auto p = s_.xs.cols();
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!s_.usable[static_cast<std::size_t>(j)]) continue;
      const double old = beta_[j];
      if (active_only && old == 0.0) continue;
      const double grad = s_.xs.col(j).dot(resid_) / n_ + old;
      const double updated = soft_threshold(grad, lambda);
      if (updated != old) {
        resid_.noalias() -= (updated - old) * s_.xs.col(j);
        beta_[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    return max_change;
  }

  // Coordinate descent crawls when active columns are nearly collinear.
  // Feature-sign step: jump towards the exact minimiser for the current sign
  // pattern, beta_A = G^-1 (c - lambda s); if a sign would flip, stop at the
  // first zero crossing, drop that variable and repeat. When the active
  // columns are rank deficient (typical once |A| reaches n), first slide along
  // a null direction of X_A: the fit is unchanged, the l1 norm does not grow,
  // and one coefficient reaches zero. The result is kept only if the overall
  // objective did not increase.
  void polish(double lambda) {
    Vector beta = beta_;
    const double before = objective(resid_, beta_.lpNorm<1>(), lambda);
    for (;;) {
      std::vector<Eigen::Index> act;
      for (Eigen::Index j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) act.push_back(j);
      if (act.empty()) return;
      const auto k = static_cast<Eigen::Index>(act.size());
      Vector sign(k), cur(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        cur[a] = beta[act[static_cast<std::size_t>(a)]];
        sign[a] = cur[a] > 0.0 ? 1.0 : -1.0;
      }

      Vector step;
      if (static_cast<double>(k) < n_) {
        Matrix gram(k, k);
        Vector rhs(k);
        for (Eigen::Index a = 0; a < k; ++a) {
          const auto j = act[static_cast<std::size_t>(a)];
          rhs[a] = corr_[j] - lambda * sign[a];
          const auto& col = gram_column(j);
          for (Eigen::Index b = 0; b < k; ++b) gram(b, a) = col[act[static_cast<std::size_t>(b)]];
        }
        const Eigen::LLT<Matrix> llt(gram);
        if (llt.info() == Eigen::Success) {
          const Vector target = llt.solve(rhs);
          if (!target.allFinite()) return;
          step = target - cur;
        }
      }
      const bool newton = step.size() > 0;
      if (!newton) {
        step = null_direction(act);
        if (step.size() == 0) return;
        if (sign.dot(step) > 0.0) step = -step;
      }

      double t = newton ? 1.0 : std::numeric_limits<double>::infinity();
      Eigen::Index hit = -1;
      for (Eigen::Index a = 0; a < k; ++a) {
        if (step[a] * sign[a] >= 0.0) continue;
        const double crossing = -cur[a] / step[a];
        if (crossing < t) {
          t = crossing;
          hit = a;
        }
      }
      if (hit < 0 && !newton) return;
      for (Eigen::Index a = 0; a < k; ++a) beta[act[static_cast<std::size_t>(a)]] = cur[a] + t * step[a];
      if (hit >= 0) {
        beta[act[static_cast<std::size_t>(hit)]] = 0.0;
        continue;
      }
      Vector resid = s_.yc;
      for (auto j : act)
        if (beta[j] != 0.0) resid.noalias() -= beta[j] * s_.xs.col(j);
      if (objective(resid, beta.lpNorm<1>(), lambda) > before) return;
      beta_ = beta;
      resid_ = resid;
      return;
    }
  }

  // A vector v (over `act`) with X_A v = 0, or empty when X_A has full rank.
  Vector null_direction(const std::vector<Eigen::Index>& act) const {
    const auto k = static_cast<Eigen::Index>(act.size());
    Matrix xa(s_.xs.rows(), k);
    for (Eigen::Index a = 0; a < k; ++a) xa.col(a) = s_.xs.col(act[static_cast<std::size_t>(a)]);
    Eigen::ColPivHouseholderQR<Matrix> qr(xa);
    qr.setThreshold(1e-10);
    const Eigen::Index r = qr.rank();
    if (r >= k) return {};
    // Column r of the pivoted order expressed through the first r pivots.
    const Matrix rmat = qr.matrixR().topLeftCorner(r, r).template triangularView<Eigen::Upper>();
    Vector coef = Vector::Zero(k);
    coef.head(r) = -rmat.template triangularView<Eigen::Upper>().solve(qr.matrixR().col(r).head(r));
    coef[r] = 1.0;
    return qr.colsPermutation() * coef;
  }

  double objective(const Vector& resid, double l1, double lambda) const {
    return resid.squaredNorm() / (2.0 * n_) + lambda * l1;
  }

  // xs' xs_j / n, computed the first time j takes part in a polish step.
  Eigen::Ref<const Vector> gram_column(Eigen::Index j) {
    if (gram_.cols() == 0) gram_.resize(s_.xs.cols(), s_.xs.cols());
    if (!cached_[static_cast<std::size_t>(j)]) {
      gram_.col(j).noalias() = s_.xs.transpose() * s_.xs.col(j) / n_;
      cached_[static_cast<std::size_t>(j)] = 1;
    }
    return gram_.col(j);
  }

  static constexpr std::size_t kPolishAfter = 16;  // then at every power of two

  const Standardized& s_;
  const LassoOptions& options_;
  double n_;
  Vector beta_;
  Vector resid_;
  Vector corr_;
  Matrix gram_;
  std::vector<char> cached_;
};

void check_grid(std::span<const double> grid) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0)) throw InputError("lasso grid values must be positive");
    if (k > 0 && !(grid[k] < grid[k - 1])) throw InputError("lasso grid must be strictly decreasing");
  }
}

double lambda_max_of(const Standardized& s) {
  const double n = static_cast<double>(s.xs.rows());
  double best = 0.0;
  for (Eigen::Index j = 0; j < s.xs.cols(); ++j)
    best = std::max(best, std::abs(s.xs.col(j).dot(s.yc)) / n);
  return best;
}

std::vector<double> log_grid(double lambda_max, const LassoOptions& options) {
  std::vector<double> grid(options.n_lambda);
  if (options.n_lambda == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double log_ratio = std::log(options.lambda_min_ratio);
  for (std::size_t k = 0; k < options.n_lambda; ++k) {
    grid[k] = lambda_max * std::exp(log_ratio * static_cast<double>(k) /
                                    static_cast<double>(options.n_lambda - 1));
  }
  return grid;
}

Matrix rows_of(const Matrix& x, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
  return out;
}

Vector rows_of(const Vector& y, const std::vector<Eigen::Index>& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out[static_cast<Eigen::Index>(r)] = y[rows[r]];
  return out;
}

}  // namespace

double lasso_lambda_max(const Matrix& x, const Vector& y) {
  return lambda_max_of(standardize(x, y));
}

std::vector<double> lasso_grid(const Matrix& x, const Vector& y, const LassoOptions& options) {
  const double lmax = lasso_lambda_max(x, y);
  if (!(lmax > 0.0)) throw NumericError("lasso lambda_max is zero (constant response or design)");
  return log_grid(lmax, options);
}

std::vector<LassoFit> lasso_path(const Matrix& x, const Vector& y, std::span<const double> grid,
                                 const LassoOptions& options) {
  if (y.size() != x.rows()) throw DimensionMismatch("response length does not match design rows");
  check_grid(grid);
  const Standardized s = standardize(x, y);
  CoordinateDescent cd(s, options);
  std::vector<LassoFit> path;
  path.reserve(grid.size());
  for (double lambda : grid) {
    cd.solve(lambda);
    path.push_back(cd.fit(lambda));
  }
  return path;
}

double lasso_kkt_violation(const Matrix& x, const Vector& y, const LassoFit& fit) {
  const Standardized s = standardize(x, y);
  const double n = static_cast<double>(x.rows());
  const Vector resid = (y - x * fit.coefficients).array() - fit.intercept;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (!s.usable[static_cast<std::size_t>(j)]) continue;
    const double g = s.xs.col(j).dot(resid) / n;
    const double b = fit.coefficients[j];
    const double v = b != 0.0 ? std::abs(g - fit.lambda * (b > 0 ? 1.0 : -1.0))
                              : std::max(0.0, std::abs(g) - fit.lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

LassoCvResult lasso_cv(const Matrix& x, const Vector& y, std::size_t folds, SeededStream stream,
                       const LassoOptions& options) {
  const auto n = x.rows();
  if (y.size() != n) throw DimensionMismatch("response length does not match design rows");
  if (folds < 2 || static_cast<Eigen::Index>(folds) > n) {
    throw InputError("lasso cross-validation needs 2 <= folds <= n, got " + std::to_string(folds));
  }
  LassoCvResult out;
  const Standardized full = standardize(x, y);
  const double lmax = lambda_max_of(full);
  if (!(lmax > 0.0)) {
    // Nothing can enter the model: the intercept-only fit is the answer.
    out.grid = {1.0};
    out.cv_error = {0.0};
    out.fit.lambda = 1.0;
    out.fit.intercept = full.ymean;
    out.fit.coefficients = Vector::Zero(x.cols());
    return out;
  }
  out.grid = log_grid(lmax, options);

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::shuffle(perm.begin(), perm.end(), stream.engine());
  std::vector<std::size_t> fold_of(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < perm.size(); ++r) fold_of[static_cast<std::size_t>(perm[r])] = r % folds;

  std::vector<double> sse(out.grid.size(), 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < n; ++i) (fold_of[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
    const Matrix x_train = rows_of(x, train);
    const Vector y_train = rows_of(y, train);
    const Matrix x_test = rows_of(x, test);
    const Vector y_test = rows_of(y, test);
    const Standardized s = standardize(x_train, y_train);
    CoordinateDescent cd(s, options);
    for (std::size_t k = 0; k < out.grid.size(); ++k) {
      cd.solve(out.grid[k]);
      const LassoFit fit = cd.fit(out.grid[k]);
      const Vector pred = (x_test * fit.coefficients).array() + fit.intercept;
      sse[k] += (y_test - pred).squaredNorm();
    }
  }
  out.cv_error.resize(sse.size());
  for (std::size_t k = 0; k < sse.size(); ++k) out.cv_error[k] = sse[k] / static_cast<double>(n);
  out.best = static_cast<std::size_t>(
      std::min_element(out.cv_error.begin(), out.cv_error.end()) - out.cv_error.begin());

  CoordinateDescent cd(full, options);
  for (std::size_t k = 0; k <= out.best; ++k) cd.solve(out.grid[k]);
  out.fit = cd.fit(out.grid[out.best]);
  return out;
}

ScreeningOutcome lasso_outcome(const Matrix& x, const Vector& y, std::size_t m,
                               const LassoCvResult& cv, const LassoOptions& options) {
  const auto p = static_cast<std::size_t>(x.cols());
  ScreeningOutcome out;
  out.method = ScreenerId::Lasso;
  out.scores = cv.fit.coefficients.cwiseAbs();
  if (m >= p) {
    out.selected = VariableSet::range(p);
    return out;
  }
  VariableSet chosen = cv.fit.active;
  if (chosen.size() > m) {
    Vector masked = Vector::Constant(static_cast<Eigen::Index>(p), -1.0);
    for (auto j : chosen) masked[static_cast<Eigen::Index>(j)] = out.scores[static_cast<Eigen::Index>(j)];
    chosen = top_m(masked, m);
  } else if (chosen.size() < m && options.pad_to_m) {
    chosen = pad_by_correlation(x, y, chosen, m);
  }
  out.selected = std::move(chosen);
  return out;
}

ScreeningOutcome lasso_screen(const Matrix& x, const Vector& y, std::size_t m, std::size_t folds,
                              SeededStream stream, const LassoOptions& options) {
  if (m >= static_cast<std::size_t>(x.rows()) && m < static_cast<std::size_t>(x.cols())) {
    throw InputError("lasso_screen needs M < n");
  }
  const LassoCvResult cv = lasso_cv(x, y, folds, std::move(stream), options);
  return lasso_outcome(x, y, m, cv, options);
}

}  // namespace screenlab
