#include "screenlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace screenlab {

namespace {

constexpr Eigen::Index kMaxDiscrepancyDim = 3;
constexpr Eigen::Index kMaxDiscrepancyPoints = 200;

std::vector<double> axis_grid(const Matrix& pts, Eigen::Index d) {
  std::vector<double> g(pts.col(d).data(), pts.col(d).data() + pts.rows());
  g.push_back(1.0);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

struct Sweep {
  const Matrix& pts;
  std::vector<std::vector<double>> grid;
  double m;
  double worst = 0.0;

  // Fixes corner coordinates for dims < last, then sweeps the last axis.
  void run(Eigen::Index dim, std::vector<double>& corner, const std::vector<Eigen::Index>& open,
           const std::vector<Eigen::Index>& closed) {
    const Eigen::Index last = pts.cols() - 1;
    if (dim == last) {
      sweep_last(corner, open, closed);
      return;
    }
    for (double g : grid[static_cast<std::size_t>(dim)]) {
      std::vector<Eigen::Index> o, c;
      for (auto i : open)
        if (pts(i, dim) < g) o.push_back(i);
      for (auto i : closed)
        if (pts(i, dim) <= g) c.push_back(i);
      corner[static_cast<std::size_t>(dim)] = g;
      run(dim + 1, corner, o, c);
    }
  }

  void sweep_last(const std::vector<double>& corner, const std::vector<Eigen::Index>& open,
                  const std::vector<Eigen::Index>& closed) {
    const Eigen::Index last = pts.cols() - 1;
    double base_volume = 1.0;
    for (Eigen::Index k = 0; k < last; ++k) base_volume *= corner[static_cast<std::size_t>(k)];
    std::vector<double> ov, cv;
    for (auto i : open) ov.push_back(pts(i, last));
    for (auto i : closed) cv.push_back(pts(i, last));
    std::sort(ov.begin(), ov.end());
    std::sort(cv.begin(), cv.end());
    std::size_t oi = 0, ci = 0;
    for (double g : grid[static_cast<std::size_t>(last)]) {
      while (oi < ov.size() && ov[oi] < g) ++oi;
      while (ci < cv.size() && cv[ci] <= g) ++ci;
      const double volume = base_volume * g;
      worst = std::max(worst, volume - static_cast<double>(oi) / m);
      worst = std::max(worst, static_cast<double>(ci) / m - volume);
    }
  }
};

}  // namespace

double star_discrepancy(const Matrix& points) {
  if (points.cols() < 1 || points.rows() < 1) throw InvalidShape("discrepancy needs at least one point");
  if (points.cols() > kMaxDiscrepancyDim || points.rows() > kMaxDiscrepancyPoints) {
    throw TooLarge("exact discrepancy is limited to d <= 3 and m <= 200, got d = " +
                   std::to_string(points.cols()) + ", m = " + std::to_string(points.rows()));
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = 0; j < points.cols(); ++j)
      if (!(points(i, j) >= 0.0 && points(i, j) < 1.0))
        throw OutOfRangeEntry(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1, points(i, j));

  Sweep s{points, {}, static_cast<double>(points.rows())};
  for (Eigen::Index d = 0; d < points.cols(); ++d) s.grid.push_back(axis_grid(points, d));
  std::vector<Eigen::Index> all(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  std::vector<double> corner(static_cast<std::size_t>(points.cols()), 1.0);
  s.run(0, corner, all, all);
  return std::min(1.0, s.worst);
}

Vector sobol_first_order(const IntegrableFunction& f, std::size_t samples, SeededStream& stream) {
  if (samples < 1024) throw InputError("Sobol' estimation needs N >= 1024");
  const auto dim = f.dim;
  const auto n = static_cast<Eigen::Index>(samples);
  Matrix a(n, static_cast<Eigen::Index>(dim)), b(n, static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = stream.uniform();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = stream.uniform();

  auto eval_row = [&](const Matrix& m, Eigen::Index i, std::vector<double>& buf) {
    for (std::size_t j = 0; j < dim; ++j) buf[j] = m(i, static_cast<Eigen::Index>(j));
    const double v = f.eval(buf);
    if (!std::isfinite(v)) throw NonFiniteEvaluation("function is not finite at a sample point");
    return v;
  };

  std::vector<double> buf(dim);
  Vector fa(n), fb(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    fa[i] = eval_row(a, i, buf);
    fb[i] = eval_row(b, i, buf);
  }
  const double mean = 0.5 * (fa.mean() + fb.mean());
  const double var = 0.5 * ((fa.array() - mean).square().mean() + (fb.array() - mean).square().mean());
  if (var < 1e-14) throw ZeroVariance("function variance estimate is below 1e-14");

  Vector s(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < dim; ++k) buf[k] = a(i, static_cast<Eigen::Index>(k));
      buf[j] = b(i, static_cast<Eigen::Index>(j));
      const double v = f.eval(buf);
      if (!std::isfinite(v)) throw NonFiniteEvaluation("function is not finite at a sample point");
      acc += fb[i] * (v - fa[i]);
    }
    s[static_cast<Eigen::Index>(j)] = std::clamp(acc / static_cast<double>(n) / var, 0.0, 1.0);
  }
  return s;
}

}  // namespace screenlab
