#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "screenlab/screeners.hpp"

namespace screenlab {

namespace {

void check_shapes(const Matrix& x, const Vector& y, Eigen::Index min_n) {
  if (y.size() != x.rows()) {
    throw DimensionMismatch("response length " + std::to_string(y.size()) +
                            " does not match design rows " + std::to_string(x.rows()));
  }
  if (x.rows() < min_n) {
    throw InvalidShape("screening needs at least " + std::to_string(min_n) + " runs");
  }
}

// Relative threshold below which a centred column counts as constant.
bool is_constant(const Eigen::Ref<const Vector>& centered, double scale) {
  return centered.squaredNorm() <= 1e-24 * std::max(1.0, scale);
}

// Row means of |v_i - v_k| in O(n log n) using sorted prefix sums.
Vector distance_row_means(const Vector& v) {
  const auto n = v.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  const double total = v.sum();
  Vector means(n);
  double below = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto i = order[static_cast<std::size_t>(r)];
    const double vi = v[i];
    // r values are <= vi, n - r - 1 are >= vi
    const double above = total - below - vi;
    means[i] = (vi * static_cast<double>(r) - below + above - vi * static_cast<double>(n - r - 1)) /
               static_cast<double>(n);
    below += vi;
  }
  return means;
}

// Sum over i,k of the double-centred distance matrices A_ik * B_ik, computed
// without storing the n x n matrices.
double centered_product(const Vector& u, const Vector& u_row, double u_grand, const Vector& v,
                        const Vector& v_row, double v_grand) {
  const auto n = u.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    const double ui = u[i], vi = v[i];
    const double ai = u_row[i] - u_grand;
    const double bi = v_row[i] - v_grand;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double a = std::abs(ui - u[k]) - ai - u_row[k];
      const double b = std::abs(vi - v[k]) - bi - v_row[k];
      row += a * b;
    }
    acc += row;
  }
  return acc;
}

}  // namespace

Vector sis_scores(const Matrix& x, const Vector& y) {
  check_shapes(x, y, 3);
  const Vector yc = y.array() - y.mean();
  const double yy = yc.squaredNorm();
  Vector scores = Vector::Zero(x.cols());
  if (is_constant(yc, y.squaredNorm())) return scores;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Vector xc = x.col(j).array() - x.col(j).mean();
    if (is_constant(xc, x.col(j).squaredNorm())) continue;
    scores[j] = std::min(1.0, std::abs(xc.dot(yc)) / std::sqrt(xc.squaredNorm() * yy));
  }
  return scores;
}

Vector sirs_scores(const Matrix& x, const Vector& y) {
  check_shapes(x, y, 3);
  const auto n = x.rows();
  const double nd = static_cast<double>(n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return y[a] < y[b]; });

  Vector scores = Vector::Zero(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Vector xc = x.col(j).array() - x.col(j).mean();
    if (is_constant(xc, x.col(j).squaredNorm())) continue;
    const Vector xs = xc / std::sqrt(xc.squaredNorm() / nd);
    // Walk y in increasing order; every k in a tie group sees the prefix of
    // strictly smaller responses.
    double prefix = 0.0;
    double total = 0.0;
    Eigen::Index r = 0;
    while (r < n) {
      Eigen::Index g = r;
      while (g < n && y[order[static_cast<std::size_t>(g)]] == y[order[static_cast<std::size_t>(r)]]) ++g;
      const double inner = prefix / nd;
      total += static_cast<double>(g - r) * inner * inner;
      for (Eigen::Index t = r; t < g; ++t) prefix += xs[order[static_cast<std::size_t>(t)]];
      r = g;
    }
    scores[j] = total / nd;
  }
  return scores;
}

Vector dcsis_scores(const Matrix& x, const Vector& y) {
  check_shapes(x, y, 4);
  const double n2 = static_cast<double>(x.rows()) * static_cast<double>(x.rows());
  const Vector y_row = distance_row_means(y);
  const double y_grand = y_row.mean();
  const double dvar_y = centered_product(y, y_row, y_grand, y, y_row, y_grand) / n2;

  Vector scores = Vector::Zero(x.cols());
  if (dvar_y <= 1e-14 * std::max(1.0, y.squaredNorm() / static_cast<double>(y.size()))) return scores;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Vector xj = x.col(j);
    const Vector x_row = distance_row_means(xj);
    const double x_grand = x_row.mean();
    const double dvar_x = centered_product(xj, x_row, x_grand, xj, x_row, x_grand) / n2;
    if (dvar_x <= 1e-14 * std::max(1.0, xj.squaredNorm() / static_cast<double>(xj.size()))) continue;
    const double dcov = centered_product(xj, x_row, x_grand, y, y_row, y_grand) / n2;
    const double r2 = std::max(0.0, dcov) / std::sqrt(dvar_x * dvar_y);
    scores[j] = std::sqrt(std::min(1.0, r2));
  }
  return scores;
}

VariableSet top_m(const Vector& scores, std::size_t m) {
  const auto p = static_cast<std::size_t>(scores.size());
  if (m > p) throw InputError("top_m: M = " + std::to_string(m) + " exceeds p = " + std::to_string(p));
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] > scores[static_cast<Eigen::Index>(b)];
  });
  order.resize(m);
  return VariableSet::from_unsorted(std::move(order));
}

}  // namespace screenlab
