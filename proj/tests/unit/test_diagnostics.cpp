#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "screenlab/diagnostics.hpp"
#include "screenlab/sampling.hpp"
#include "screenlab/testbed.hpp"

using namespace screenlab;

namespace {

Matrix points(std::size_t m, std::size_t d, std::uint64_t seed) {
  SeededStream s(seed, 0);
  return sample_uniform_design(std::max<std::size_t>(m, 2), d, s).matrix().topRows(static_cast<Eigen::Index>(m));
}

// Naive enumeration over every corner drawn from realised coordinates and 1.
double brute_discrepancy(const Matrix& pts) {
  const auto m = pts.rows(), d = pts.cols();
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) axes[static_cast<std::size_t>(k)].push_back(pts(i, k));
    axes[static_cast<std::size_t>(k)].push_back(1.0);
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  double worst = 0.0;
  while (true) {
    double vol = 1.0;
    for (Eigen::Index k = 0; k < d; ++k) vol *= axes[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
    int open = 0, closed = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      bool lt = true, le = true;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double z = axes[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
        lt = lt && pts(i, k) < z;
        le = le && pts(i, k) <= z;
      }
      open += lt;
      closed += le;
    }
    worst = std::max({worst, vol - open / double(m), closed / double(m) - vol});
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == axes[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return std::min(worst, 1.0);
}

}  // namespace

TEST(StarDiscrepancy, ExactSmallCases) {
  EXPECT_DOUBLE_EQ(star_discrepancy((Matrix(1, 1) << 0.5).finished()), 0.5);
  EXPECT_DOUBLE_EQ(star_discrepancy((Matrix(2, 1) << 0.25, 0.75).finished()), 0.25);
  EXPECT_DOUBLE_EQ(star_discrepancy((Matrix(1, 2) << 0.0, 0.0).finished()), 1.0);
  for (std::size_t m = 1; m <= 25; ++m) {
    Matrix mids(static_cast<Eigen::Index>(m), 1);
    for (std::size_t i = 0; i < m; ++i) mids(static_cast<Eigen::Index>(i), 0) = (2.0 * i + 1) / (2.0 * m);
    EXPECT_NEAR(star_discrepancy(mids), 0.5 / double(m), 1e-15);
  }
}

TEST(StarDiscrepancy, MatchesNaiveEnumeration) {
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Matrix pts = points(3 + seed, d, 10 * d + seed);
      EXPECT_NEAR(star_discrepancy(pts), brute_discrepancy(pts), 1e-14) << "d " << d << " seed " << seed;
    }
}

TEST(StarDiscrepancy, BoundsEveryAnchoredBox) {
  const Matrix pts = points(30, 2, 3);
  const double d = star_discrepancy(pts);
  SeededStream s(4, 0);
  for (int t = 0; t < 2000; ++t) {
    const double a = s.uniform(), b = s.uniform();
    int count = 0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) count += pts(i, 0) < a && pts(i, 1) < b;
    EXPECT_LE(std::abs(count / 30.0 - a * b), d + 1e-15);
  }
}

TEST(StarDiscrepancy, CoordinatePermutationInvariant) {
  const Matrix pts = points(20, 3, 5);
  Matrix swapped(pts.rows(), 3);
  swapped << pts.col(2), pts.col(0), pts.col(1);
  EXPECT_DOUBLE_EQ(star_discrepancy(pts), star_discrepancy(swapped));
}

TEST(StarDiscrepancy, AddingOnePointMovesLittle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix pts = points(12, 2, 100 + seed);
    const double before = star_discrepancy(pts.topRows(11)), after = star_discrepancy(pts);
    EXPECT_LE(std::abs(after - before), 2.0 / 11.0);
  }
}

TEST(StarDiscrepancy, Errors) {
  EXPECT_THROW(star_discrepancy(Matrix(2, 4)), TooLarge);
  EXPECT_THROW(star_discrepancy(points(201, 1, 6)), TooLarge);
  EXPECT_THROW(star_discrepancy(Matrix(0, 1)), InvalidShape);
  EXPECT_THROW(star_discrepancy((Matrix(1, 1) << 1.0).finished()), OutOfRangeEntry);
}

TEST(Sobol, AdditiveFunctions) {
  SeededStream s(7, 0);
  const IntegrableFunction sum2{2, [](std::span<const double> x) { return x[0] + x[1]; }};
  const Vector si = sobol_first_order(sum2, 1 << 16, s);
  EXPECT_NEAR(si[0], 0.5, 0.02);
  EXPECT_NEAR(si[1], 0.5, 0.02);

  const IntegrableFunction weighted{3, [](std::span<const double> x) { return x[0] + 2 * x[1] * x[1] + std::sin(3 * x[2]); }};
  const Vector w = sobol_first_order(weighted, 1 << 16, s);
  EXPECT_NEAR(w.sum(), 1.0, 0.05);
  for (double v : w) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Sobol, ErrorsAndReproducibility) {
  SeededStream s(8, 0);
  const IntegrableFunction flat{2, [](std::span<const double>) { return 4.0; }};
  EXPECT_THROW(sobol_first_order(flat, 1 << 12, s), ZeroVariance);
  const IntegrableFunction lin{1, [](std::span<const double> x) { return x[0]; }};
  EXPECT_THROW(sobol_first_order(lin, 1000, s), InputError);
  SeededStream a(9, 0), b(9, 0);
  const IntegrableFunction bore = as_integrable(make_test_function(TestFunctionId::Borehole, 8, 8));
  EXPECT_EQ(sobol_first_order(bore, 1 << 12, a), sobol_first_order(bore, 1 << 12, b));
}
