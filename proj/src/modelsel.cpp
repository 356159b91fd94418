#include "screenlab/modelsel.hpp"

#include <algorithm>
#include <cmath>

#include "screenlab/bla.hpp"

namespace screenlab {

std::size_t default_m(std::size_t n) {
  if (n < 3) throw InputError("default_m needs n >= 3");
  const double raw = std::round(static_cast<double>(n) / std::log(static_cast<double>(n)));
  const auto m = static_cast<std::size_t>(std::max(1.0, raw));
  return std::clamp<std::size_t>(m, 1, n - 2);
}

double gcv_value(double rss, std::size_t n, std::size_t m) {
  const double nd = static_cast<double>(n);
  const double shrink = 1.0 - static_cast<double>(m) / nd;
  return rss / (nd * shrink * shrink);
}

namespace {

VariableSet best_subset(const Matrix& x, const Vector& y, std::size_t m, SubsetSolver solver,
                        const VariableSet& init, const FossOptions& foss, double* rss_out) {
  VariableSet s;
  if (solver == SubsetSolver::Exhaustive) {
    s = exhaustive_best_subset(x, y, m);
    *rss_out = rss(x, y, s);
    return s;
  }
  const FossResult r = foss_solve(x, y, m, init, foss);
  *rss_out = r.rss;
  return r.selected;
}

void check_m(const Matrix& x, std::size_t m) {
  if (m < 1 || m >= static_cast<std::size_t>(x.rows())) {
    throw InputError("GCV needs 1 <= M < n, got M = " + std::to_string(m));
  }
}

}  // namespace

double gcv(const Matrix& x, const Vector& y, std::size_t m, SubsetSolver solver,
           const VariableSet& init) {
  check_m(x, m);
  double r = 0.0;
  best_subset(x, y, m, solver, init, FossOptions{}, &r);
  return gcv_value(r, static_cast<std::size_t>(x.rows()), m);
}

MSelection select_m(const Matrix& x, const Vector& y, std::size_t m0, const SelectMOptions& options) {
  const auto n = static_cast<std::size_t>(x.rows());
  check_m(x, m0);
  const std::size_t dm = std::min(default_m(n), static_cast<std::size_t>(x.cols()));
  MSelection out;
  out.lower = std::min(m0, dm);
  out.upper = std::max(m0, dm);
  if (out.upper >= n) throw InputError("GCV search interval reaches n");

  if (out.lower == out.upper) {
    out.m = out.lower;
    double r = 0.0;
    out.selected = best_subset(x, y, out.m, options.solver, options.init, options.foss, &r);
    out.gcv = gcv_value(r, n, out.m);
    out.gcv_curve = {out.gcv};
    return out;
  }

  // GCV values closer than this are ties; it keeps rounding noise in
  // interpolating fits from pushing M up.
  const double tie = 1e-12 * (y.array() - y.mean()).square().sum() / static_cast<double>(n);
  VariableSet warm = options.init;
  double best = 0.0;
  for (std::size_t m = out.lower; m <= out.upper; ++m) {
    double r = 0.0;
    VariableSet s = best_subset(x, y, m, options.solver, warm, options.foss, &r);
    const double value = gcv_value(r, n, m);
    out.gcv_curve.push_back(value);
    if (m == out.lower || value < best - tie) {
      best = value;
      out.m = m;
      out.selected = s;
    }
    warm = std::move(s);
  }
  out.gcv = best;
  return out;
}

MSelection select_m(const Matrix& x, const Vector& y, const SeededStream& stream,
                    const ScreenOptions& options) {
  const LassoCvResult cv = lasso_cv(x, y, options.lasso.folds, stream, options.lasso);
  const auto n = static_cast<std::size_t>(x.rows());
  std::size_t m0 = std::clamp<std::size_t>(cv.fit.active.size(), 1, n - 2);
  SelectMOptions sel;
  sel.foss = options.foss;
  LassoOptions no_pad = options.lasso;
  no_pad.pad_to_m = false;
  sel.init = lasso_outcome(x, y, std::min(m0, default_m(n)), cv, no_pad).selected;
  return select_m(x, y, m0, sel);
}

}  // namespace screenlab
