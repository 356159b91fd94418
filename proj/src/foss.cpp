#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "screenlab/screeners.hpp"

namespace screenlab {

namespace {

Matrix with_intercept(const Matrix& x, const VariableSet& subset) {
  Matrix d(x.rows(), static_cast<Eigen::Index>(subset.size()) + 1);
  d.col(0).setOnes();
  for (std::size_t k = 0; k < subset.size(); ++k)
    d.col(static_cast<Eigen::Index>(k) + 1) = x.col(static_cast<Eigen::Index>(subset[k]));
  return d;
}

double subset_rss(const Matrix& x, const Vector& y, const VariableSet& subset) {
  const Matrix d = with_intercept(x, subset);
  Eigen::ColPivHouseholderQR<Matrix> qr(d);
  return (y - d * qr.solve(y)).squaredNorm();
}

// Everything needed to price every single swap of a subset in O(|S| p).
struct SwapTable {
  double rss = 0.0;
  Vector drop_gain;   // a_i^2: RSS increase when subset[i] leaves
  Vector a;           // a_i = q_i'y, q_i the unit part of x_i orthogonal to the rest
  Matrix b;           // b(i, k) = q_i'x_k
  Vector c;           // c_k = r'x_k
  Vector d;           // d_k = |x_k - P_S x_k|^2
};

SwapTable build_swap_table(const Matrix& x, const Vector& y, const VariableSet& subset) {
  const Matrix design = with_intercept(x, subset);
  const auto cols = design.cols();
  Eigen::HouseholderQR<Matrix> qr(design);
  const Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), cols);
  const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  const Vector diag = r.diagonal().cwiseAbs();
  if (diag.minCoeff() < 1e-9 * diag.maxCoeff()) {
    throw SingularGram("subset " + to_string(subset) + " has linearly dependent columns");
  }
  const Matrix r_inv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(cols, cols));

  SwapTable t;
  const Matrix qtx = q.transpose() * x;
  const Vector qty = q.transpose() * y;
  const Vector resid = y - q * qty;
  t.rss = resid.squaredNorm();
  t.c = x.transpose() * resid;
  t.d = (x - q * qtx).colwise().squaredNorm().transpose();

  const auto k = cols - 1;
  const Matrix bu = r_inv.bottomRows(k) * qtx;
  const Vector au = r_inv.bottomRows(k) * qty;
  const Vector norms = r_inv.bottomRows(k).rowwise().norm();
  t.b = norms.cwiseInverse().asDiagonal() * bu;
  t.a = au.cwiseQuotient(norms);
  t.drop_gain = t.a.cwiseAbs2();
  return t;
}

// Greedy forward selection by residual orthogonalisation, starting from `start`.
VariableSet greedy_fill(const Matrix& x, const Vector& y, const VariableSet& start, std::size_t m) {
  const auto n = x.rows();
  const auto p = static_cast<std::size_t>(x.cols());
  Matrix z = x.rowwise() - x.colwise().mean();
  Vector resid = y.array() - y.mean();
  const Vector floor_norm = 1e-10 * x.colwise().squaredNorm().transpose().cwiseMax(1e-300);
  std::vector<char> in(p, 0);
  std::vector<std::size_t> chosen;

  auto absorb = [&](std::size_t k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double nrm = z.col(kk).norm();
    in[k] = 1;
    chosen.push_back(k);
    if (nrm * nrm <= floor_norm[kk]) return;
    const Vector qv = z.col(kk) / nrm;
    z.noalias() -= qv * (qv.transpose() * z);
    resid -= qv * qv.dot(resid);
  };

  for (auto k : start) absorb(k);
  while (chosen.size() < m && static_cast<Eigen::Index>(chosen.size()) + 1 < n) {
    double best = -1.0;
    std::size_t best_k = p;
    for (std::size_t k = 0; k < p; ++k) {
      if (in[k]) continue;
      const auto kk = static_cast<Eigen::Index>(k);
      const double dk = z.col(kk).squaredNorm();
      if (dk <= floor_norm[kk]) continue;
      const double ck = z.col(kk).dot(resid);
      const double gain = ck * ck / dk;
      if (gain > best) {
        best = gain;
        best_k = k;
      }
    }
    if (best_k == p) break;  // every remaining column is in the span
    absorb(best_k);
  }
  return VariableSet::from_unsorted(std::move(chosen));
}

}  // namespace

std::size_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    if (r > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    r = r * num / i;
  }
  return r;
}

VariableSet pad_by_correlation(const Matrix& x, const Vector& y, const VariableSet& init,
                               std::size_t m) {
  const auto p = static_cast<std::size_t>(x.cols());
  if (m > p) throw InputError("cannot pad to M = " + std::to_string(m) + " > p = " + std::to_string(p));
  if (init.size() == m) return init;
  const Vector corr = sis_scores(x, y);
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corr[static_cast<Eigen::Index>(a)] > corr[static_cast<Eigen::Index>(b)];
  });
  std::vector<std::size_t> out;
  if (init.size() > m) {
    for (auto j : order)
      if (init.contains(j) && out.size() < m) out.push_back(j);
  } else {
    out = init.indices();
    for (auto j : order) {
      if (out.size() == m) break;
      if (!init.contains(j)) out.push_back(j);
    }
  }
  return VariableSet::from_unsorted(std::move(out));
}

FossResult foss_solve(const Matrix& x, const Vector& y, std::size_t m, const VariableSet& init,
                      const FossOptions& options) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  if (static_cast<std::size_t>(y.size()) != n) throw DimensionMismatch("response length does not match design rows");
  if (m > p) throw InputError("FOSS: M = " + std::to_string(m) + " exceeds p = " + std::to_string(p));
  if (m >= n) throw SubsetTooLarge("FOSS needs M < n, got M = " + std::to_string(m) + ", n = " + std::to_string(n));
  if (auto mx = init.max(); mx && *mx >= p) throw IndexExceedsDimension("FOSS init index exceeds p");

  FossResult out;
  const VariableSet trimmed = init.size() > m ? pad_by_correlation(x, y, init, m) : init;
  const VariableSet padded = pad_by_correlation(x, y, trimmed, m);
  out.start_rss = subset_rss(x, y, padded);
  VariableSet current = padded;
  double current_rss = out.start_rss;
  const VariableSet greedy = greedy_fill(x, y, trimmed, m);
  if (greedy.size() == m) {
    const double greedy_rss = subset_rss(x, y, greedy);
    if (greedy_rss < current_rss) {
      current = greedy;
      current_rss = greedy_rss;
    }
  }
  out.rss_trace.push_back(current_rss);

  if (m == p || m == 0) {
    out.selected = current;
    out.rss = current_rss;
    return out;
  }

  std::vector<char> in(p, 0);
  for (auto j : current) in[j] = 1;
  const Vector floor_norm = 1e-10 * x.colwise().squaredNorm().transpose().cwiseMax(1e-300);

  while (out.swaps < options.max_swaps) {
    const SwapTable t = build_swap_table(x, y, current);
    const double threshold = std::max(options.tolerance, 1e-12 * t.rss);
    double best_rss = t.rss;
    std::size_t best_out = m, best_in = p;
    for (std::size_t pos = 0; pos < m; ++pos) {
      const auto row = static_cast<Eigen::Index>(pos);
      const double ai = t.a[row];
      const double base = t.rss + ai * ai;
      for (std::size_t k = 0; k < p; ++k) {
        if (in[k]) continue;
        const auto kk = static_cast<Eigen::Index>(k);
        const double bik = t.b(row, kk);
        const double den = t.d[kk] + bik * bik;
        if (den <= floor_norm[kk]) continue;
        const double num = t.c[kk] + ai * bik;
        const double candidate = base - num * num / den;
        if (candidate < best_rss) {
          best_rss = candidate;
          best_out = pos;
          best_in = k;
        }
      }
    }
    if (best_in == p || t.rss - best_rss <= threshold) break;

    std::vector<std::size_t> next = current.indices();
    const std::size_t leaving = next[best_out];
    next[best_out] = best_in;
    VariableSet candidate = VariableSet::from_unsorted(std::move(next));
    const double actual = subset_rss(x, y, candidate);
    if (!(actual < t.rss)) break;  // rounding disagreed with the update formula
    in[leaving] = 0;
    in[best_in] = 1;
    current = std::move(candidate);
    current_rss = actual;
    ++out.swaps;
    out.rss_trace.push_back(current_rss);
  }
  out.selected = current;
  out.rss = current_rss;
  return out;
}

ScreeningOutcome foss_screen(const Matrix& x, const Vector& y, std::size_t m,
                             const VariableSet& init, const FossOptions& options) {
  const FossResult res = foss_solve(x, y, m, init, options);
  ScreeningOutcome out;
  out.method = ScreenerId::FOSS;
  out.selected = res.selected;
  out.rss = res.rss;
  out.scores = Vector::Zero(x.cols());
  if (!res.selected.empty()) {
    const SwapTable t = build_swap_table(x, y, res.selected);
    for (std::size_t k = 0; k < res.selected.size(); ++k)
      out.scores[static_cast<Eigen::Index>(res.selected[k])] = t.drop_gain[static_cast<Eigen::Index>(k)];
  }
  return out;
}

VariableSet exhaustive_best_subset(const Matrix& x, const Vector& y, std::size_t m) {
  const auto p = static_cast<std::size_t>(x.cols());
  if (m > p) throw InputError("M exceeds p");
  if (m >= static_cast<std::size_t>(x.rows())) throw SubsetTooLarge("exhaustive search needs M < n");
  if (choose(p, m) > 1000000) {
    throw TooManySubsets("C(" + std::to_string(p) + ", " + std::to_string(m) + ") exceeds 1e6 subsets");
  }
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  VariableSet best;
  double best_rss = std::numeric_limits<double>::infinity();
  for (;;) {
    const VariableSet s{std::vector<std::size_t>(idx)};
    const double r = subset_rss(x, y, s);
    if (r < best_rss) {
      best_rss = r;
      best = s;
    }
    // next combination in lexicographic order
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == p - m + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

std::vector<ScreeningOutcome> screen_all(const Matrix& x, const Vector& y, std::size_t m,
                                         std::span<const ScreenerId> methods,
                                         const SeededStream& stream, const ScreenOptions& options) {
  const auto p = static_cast<std::size_t>(x.cols());
  if (m > p) throw InputError("M = " + std::to_string(m) + " exceeds p = " + std::to_string(p));
  std::optional<LassoCvResult> cv;
  auto shared_cv = [&]() -> const LassoCvResult& {
    if (!cv) cv = lasso_cv(x, y, options.lasso.folds, stream, options.lasso);
    return *cv;
  };

  std::vector<ScreeningOutcome> outcomes;
  for (ScreenerId method : methods) {
    ScreeningOutcome out;
    switch (method) {
      case ScreenerId::SIS:
        out.scores = sis_scores(x, y);
        break;
      case ScreenerId::SIRS:
        out.scores = sirs_scores(x, y);
        break;
      case ScreenerId::DCSIS:
        out.scores = dcsis_scores(x, y);
        break;
      case ScreenerId::Lasso:
        outcomes.push_back(lasso_outcome(x, y, m, shared_cv(), options.lasso));
        continue;
      case ScreenerId::FOSS: {
        if (m >= static_cast<std::size_t>(x.rows())) throw SubsetTooLarge("FOSS needs M < n");
        LassoOptions no_pad = options.lasso;
        no_pad.pad_to_m = false;
        const VariableSet init = lasso_outcome(x, y, m, shared_cv(), no_pad).selected;
        outcomes.push_back(foss_screen(x, y, m, init, options.foss));
        continue;
      }
    }
    out.method = method;
    out.selected = top_m(out.scores, m);
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

ScreeningOutcome screen(const Matrix& x, const Vector& y, std::size_t m, ScreenerId method,
                        const SeededStream& stream, const ScreenOptions& options) {
  const ScreenerId one[] = {method};
  return std::move(screen_all(x, y, m, one, stream, options).front());
}

}  // namespace screenlab
