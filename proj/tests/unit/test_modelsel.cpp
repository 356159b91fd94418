#include <gtest/gtest.h>

#include <cmath>

#include "screenlab/modelsel.hpp"
#include "screenlab/testbed.hpp"

using namespace screenlab;

namespace {

Matrix design(std::size_t n, std::size_t p, std::uint64_t seed) {
  SeededStream s(seed, 0);
  return sample_uniform_design(n, p, s).matrix();
}

}  // namespace

TEST(DefaultM, Arithmetic) {
  EXPECT_EQ(default_m(200), 38u);
  EXPECT_EQ(default_m(100), 22u);
  EXPECT_EQ(default_m(3), 1u);
  for (std::size_t n = 3; n < 500; ++n) {
    EXPECT_GE(default_m(n), 1u);
    EXPECT_LE(default_m(n), n - 2);
  }
}

TEST(Gcv, AlgebraicFormsAgree) {
  for (std::size_t n : {10u, 57u, 200u})
    for (std::size_t m = 1; m < n; m += 3) {
      const double r = 1.7 + static_cast<double>(m);
      const double alt = r * static_cast<double>(n) / std::pow(static_cast<double>(n - m), 2);
      EXPECT_NEAR(gcv_value(r, n, m), alt, 1e-12 * alt);
    }
  EXPECT_NEAR(gcv_value(3.0, 40, 20), 3.0 * 4 / 40, 1e-15);
  EXPECT_EQ(gcv_value(0.0, 40, 10), 0.0);
}

TEST(Gcv, UsesBestSubsetRss) {
  const Matrix x = design(30, 6, 1);
  const Vector y = (x.col(1).array() - 2 * x.col(4).array()).matrix();
  EXPECT_NEAR(gcv(x, y, 2, SubsetSolver::Exhaustive), 0.0, 1e-12);
  const Vector z = (x.col(0).array() * x.col(3).array() + x.col(5).array().square()).matrix();
  const double best = rss(x, z, exhaustive_best_subset(x, z, 2));
  EXPECT_NEAR(gcv(x, z, 2, SubsetSolver::Exhaustive), gcv_value(best, 30, 2), 1e-12);
  EXPECT_GE(gcv(x, z, 2, SubsetSolver::FOSS), gcv(x, z, 2, SubsetSolver::Exhaustive) - 1e-12);
}

TEST(SelectM, DegenerateIntervalSkipsSearch) {
  const Matrix x = design(100, 40, 2);
  const Vector y = x.col(0);
  const MSelection sel = select_m(x, y, default_m(100));
  EXPECT_EQ(sel.m, 22u);
  EXPECT_EQ(sel.lower, 22u);
  EXPECT_EQ(sel.upper, 22u);
  EXPECT_EQ(sel.gcv_curve.size(), 1u);
  EXPECT_EQ(sel.selected.size(), 22u);
}

TEST(SelectM, StaysInsideInterval) {
  for (std::uint64_t c = 0; c < 10; ++c) {
    SeededStream s(3, c);
    const Matrix x = sample_uniform_design(60, 50, s).matrix();
    const Vector y = eval_rows(make_test_function(TestFunctionId::Ackley, 5, 50), x);
    const std::size_t m0 = 1 + s.below(40);
    const MSelection sel = select_m(x, y, m0);
    EXPECT_EQ(sel.lower, std::min(m0, default_m(60)));
    EXPECT_EQ(sel.upper, std::max(m0, default_m(60)));
    EXPECT_GE(sel.m, sel.lower);
    EXPECT_LE(sel.m, sel.upper);
    EXPECT_EQ(sel.selected.size(), sel.m);
    if (!sel.gcv_curve.empty()) {
      EXPECT_EQ(sel.gcv_curve.size(), sel.upper - sel.lower + 1);
      for (std::size_t k = 0; k < sel.gcv_curve.size(); ++k) {
        EXPECT_GE(sel.gcv_curve[k], sel.gcv);
        if (sel.gcv_curve[k] == sel.gcv) {
          EXPECT_EQ(sel.lower + k, sel.m);  // first minimiser wins ties
          break;
        }
      }
    }
  }
}

TEST(SelectM, SparseLinearPrefersSmallEnd) {
  int small = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    SeededStream s = spawn_rep_stream(4, rep);
    const Matrix x = sample_uniform_design(80, 30, s).matrix();
    const Vector y = (x.col(0).array() + 2 * x.col(5).array() - x.col(9).array()).matrix();
    const MSelection sel = select_m(x, y, 10);
    small += sel.m == sel.lower;
  }
  EXPECT_GE(small, 18);
}

TEST(SelectM, StreamOverloadUsesLassoActiveSize) {
  const Matrix x = design(50, 60, 5);
  const Vector y = eval_rows(make_test_function(TestFunctionId::Yang, 4, 60), x);
  const SeededStream st(5, 1);
  const MSelection sel = select_m(x, y, st);
  const std::size_t m0 = std::max<std::size_t>(1, lasso_cv(x, y, 10, st).fit.active.size());
  EXPECT_EQ(sel.lower, std::min(m0, default_m(50)));
  EXPECT_EQ(sel.upper, std::max(m0, default_m(50)));
}

TEST(SelectM, BoreholeCurveHasInteriorMinimum) {
  const TestFunction tf = borehole_with_truth(500, VariableSet{0, 3, 5, 6, 7});
  int interior = 0, searched = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    SeededStream s = spawn_rep_stream(6, rep);
    const Matrix x = sample_uniform_design(200, 500, s).matrix();
    const MSelection sel = select_m(x, eval_rows(tf, x), s.child(1));
    if (sel.lower == sel.upper) continue;
    ++searched;
    interior += sel.m > sel.lower && sel.m < sel.upper;
  }
  EXPECT_GE(interior, (9 * searched + 9) / 10) << interior << " of " << searched << " searched intervals";
}
