// Acceptance suite: one PASS/FAIL line per criterion at its stated tolerance.
//
//   acceptance            run everything
//   acceptance 1 4 7      run a subset
//
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "screenlab/basis.hpp"
#include "screenlab/bla.hpp"
#include "screenlab/diagnostics.hpp"
#include "screenlab/experiments.hpp"
#include "screenlab/modelsel.hpp"
#include "screenlab/sampling.hpp"
#include "screenlab/screeners.hpp"
#include "screenlab/testbed.hpp"

using namespace screenlab;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [miss]");
  }
};

std::string fmt(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double coverage_of(const CoverageReport& r, ScreenerId id) {
  for (const auto& m : r.methods)
    if (m.method == id) return m.coverage;
  throw std::logic_error("method missing from report");
}

ExperimentConfig base_config(TestFunction tf, std::size_t n, std::size_t m, std::size_t reps,
                             std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.function = std::move(tf);
  cfg.n = n;
  cfg.p = cfg.function.p;
  cfg.m = m;
  cfg.reps = reps;
  cfg.master_seed = seed;
  return cfg;
}

const std::vector<ScreenerId> kAllMethods{ScreenerId::SIS, ScreenerId::SIRS, ScreenerId::DCSIS,
                                          ScreenerId::Lasso, ScreenerId::FOSS};

// 1. Function III at (100, 200, 30), p0 = 5.
Verdict yang_small() {
  auto cfg = base_config(make_test_function(TestFunctionId::Yang, 5, 200), 100, 30, 200, 101);
  const auto r = run_coverage_experiment(cfg);
  Verdict v;
  const double foss = coverage_of(r, ScreenerId::FOSS), lasso = coverage_of(r, ScreenerId::Lasso);
  const double sis = coverage_of(r, ScreenerId::SIS), dc = coverage_of(r, ScreenerId::DCSIS);
  const double sirs = coverage_of(r, ScreenerId::SIRS);
  v.check(foss >= 0.98, "L-FOSS " + fmt(foss) + " >= 0.98");
  v.check(lasso >= 0.96, "L-Lasso " + fmt(lasso) + " >= 0.96");
  v.check(std::abs(sis - 0.987) <= 0.04, "L-SIS " + fmt(sis) + " ~ 0.987+-0.04");
  v.check(std::abs(dc - 0.987) <= 0.04, "DC-SIS " + fmt(dc) + " ~ 0.987+-0.04");
  v.check(std::abs(sirs - 0.971) <= 0.04, "SIRS " + fmt(sirs) + " ~ 0.971+-0.04");
  return v;
}

// 2. Function I at (100, 1000, 50), p0 = 10: every method should mostly fail.
Verdict sphere_hard() {
  auto cfg = base_config(make_test_function(TestFunctionId::WeightedSphere, 10, 1000), 100, 50, 200, 102);
  const auto r = run_coverage_experiment(cfg);
  Verdict v;
  const double foss = coverage_of(r, ScreenerId::FOSS), lasso = coverage_of(r, ScreenerId::Lasso);
  v.check(foss <= 0.15, "L-FOSS " + fmt(foss) + " <= 0.15");
  v.check(lasso <= 0.15, "L-Lasso " + fmt(lasso) + " <= 0.15");
  for (auto id : {ScreenerId::SIS, ScreenerId::SIRS, ScreenerId::DCSIS}) {
    const double c = coverage_of(r, id);
    v.check(c <= 0.01, std::string(to_string(id)) + " " + fmt(c) + " <= 0.01");
  }
  return v;
}

// 3. Borehole with five active inputs at (200, 500, 30).
Verdict borehole_five() {
  auto cfg = base_config(borehole_with_truth(500, VariableSet{0, 3, 5, 6, 7}), 200, 30, 200, 103);
  cfg.methods = {ScreenerId::SIRS, ScreenerId::DCSIS, ScreenerId::FOSS};
  const auto r = run_coverage_experiment(cfg);
  Verdict v;
  const double foss = coverage_of(r, ScreenerId::FOSS);
  const double sirs = coverage_of(r, ScreenerId::SIRS), dc = coverage_of(r, ScreenerId::DCSIS);
  v.check(foss >= 0.95, "L-FOSS " + fmt(foss) + " >= 0.95");
  v.check(sirs <= 0.20, "SIRS " + fmt(sirs) + " <= 0.20");
  v.check(dc <= 0.20, "DC-SIS " + fmt(dc) + " <= 0.20");
  return v;
}

// 4. Borehole with two active inputs at (50, 100, 30): everything succeeds.
Verdict borehole_two() {
  auto cfg = base_config(borehole_with_truth(100, VariableSet{0, 7}), 50, 30, 200, 104);
  const auto r = run_coverage_experiment(cfg);
  Verdict v;
  for (auto id : kAllMethods) {
    const double c = coverage_of(r, id);
    v.check(c == 1.0, std::string(to_string(id)) + " " + fmt(c) + " == 1");
  }
  return v;
}

// 5. 10 (x1 - 1/2)^2 at (50, 100, 5) under each basis policy.
Verdict basis_study() {
  Verdict v;
  for (auto policy : {BasisPolicy::Linear, BasisPolicy::Quadratic, BasisPolicy::TwoStage}) {
    auto cfg = base_config(make_test_function(TestFunctionId::Quad1D, 1, 100), 50, 5, 200, 105);
    cfg.methods = {ScreenerId::Lasso, ScreenerId::FOSS};
    cfg.basis = policy;
    const auto r = run_coverage_experiment(cfg);
    const std::string tag = std::string(to_string(policy)) + " ";
    const double lasso = coverage_of(r, ScreenerId::Lasso), foss = coverage_of(r, ScreenerId::FOSS);
    if (policy == BasisPolicy::Linear) {
      v.check(lasso <= 0.05, tag + "L-Lasso " + fmt(lasso) + " <= 0.05");
    } else {
      v.check(lasso >= 0.99, tag + "L-Lasso " + fmt(lasso) + " >= 0.99");
      v.check(foss >= 0.99, tag + "L-FOSS " + fmt(foss) + " >= 0.99");
    }
  }
  return v;
}

// 6. GCV-selected M on the five-input borehole at (200, 500).
Verdict data_driven_m() {
  auto cfg = base_config(borehole_with_truth(500, VariableSet{0, 3, 5, 6, 7}), 200, 30, 100, 106);
  cfg.m.reset();
  cfg.methods = {ScreenerId::FOSS};
  const auto r = run_coverage_experiment(cfg);
  Verdict v;
  const double foss = coverage_of(r, ScreenerId::FOSS);
  v.check(r.mean_m >= 33.0 && r.mean_m <= 39.0, "mean M " + fmt(r.mean_m) + " (sd " + fmt(r.sd_m) + ") in [33, 39]");
  v.check(foss >= 0.95, "L-FOSS " + fmt(foss) + " >= 0.95");
  return v;
}

// 7. Closed-form best linear approximation.
Verdict bla_exactness() {
  Verdict v;
  const IntegrableFunction poly{1, [](std::span<const double> x) { return 10 * x[0] * x[0] - 5 * x[0] + 1; }};
  const BlaResult a = bla_closed_form(poly, 1 << 16);
  v.check(std::abs(a.intercept + 2.0 / 3.0) <= 1e-6 && std::abs(a.coefficients[0] - 5.0) <= 1e-6,
          "10x^2-5x+1 -> (" + fmt(a.intercept, 9) + ", " + fmt(a.coefficients[0], 9) + ")");
  const IntegrableFunction bowl{1, [](std::span<const double> x) { return 10 * (x[0] - 0.5) * (x[0] - 0.5); }};
  const BlaResult b = bla_closed_form(bowl, 1 << 16);
  v.check(std::abs(b.coefficients[0]) <= 1e-6, "10(x-1/2)^2 slope " + fmt(b.coefficients[0], 9));
  const double q = general_bla_coefficient(bowl, 0, BasisKind::quadratic(), 1 << 16);
  v.check(std::abs(q + 2.0 / 9.0) <= 1e-6, "quadratic-basis margin " + fmt(q, 9) + " = -2/9");
  return v;
}

// 8. FOSS against exhaustive best-subset search.
Verdict l0_oracle() {
  std::size_t equal = 0, dominated = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    SeededStream s(108, k);
    const Matrix x = sample_uniform_design(50, 8, s).matrix();
    std::normal_distribution<double> gauss;
    Vector beta(8);
    for (auto& b : beta) b = gauss(s.engine());
    Vector y = x * beta;
    for (auto& e : y) e += 0.5 * gauss(s.engine());
    const auto cv = lasso_cv(x, y, 10, s.child(1));
    LassoOptions no_pad;
    no_pad.pad_to_m = false;
    const VariableSet init = lasso_outcome(x, y, 3, cv, no_pad).selected;
    const FossResult f = foss_solve(x, y, 3, init);
    const double best = rss(x, y, exhaustive_best_subset(x, y, 3));
    if (std::abs(f.rss - best) <= 1e-9 * std::max(1.0, best)) ++equal;
    if (f.rss <= f.start_rss + 1e-10) ++dominated;
  }
  Verdict v;
  v.check(equal >= 95, "FOSS matches exhaustive RSS in " + std::to_string(equal) + "/100 (>= 95)");
  v.check(dominated == 100, "FOSS <= Lasso-start RSS in " + std::to_string(dominated) + "/100");
  return v;
}

// 9. First-order Sobol' indices of the borehole function.
Verdict borehole_sobol() {
  SeededStream s(109, 0);
  const Vector si = sobol_first_order(as_integrable(make_test_function(TestFunctionId::Borehole, 8, 8)), 1 << 16, s);
  Verdict v;
  v.check(std::abs(si[0] - 0.5713) <= 0.02, "S_rw " + fmt(si[0], 4) + " ~ 0.5713+-0.02");
  v.check(std::abs(si[7] - 0.4649) <= 0.02, "S_Kw " + fmt(si[7], 4) + " ~ 0.4649+-0.02");
  return v;
}

// 10. Property suites.
Matrix permute_columns(const Matrix& x, const std::vector<std::size_t>& perm) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t k = 0; k < perm.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(perm[k]));
  return out;
}

std::vector<std::size_t> argsort(const Vector& v) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](auto a, auto b) { return v[static_cast<Eigen::Index>(a)] > v[static_cast<Eigen::Index>(b)]; });
  return idx;
}

Verdict properties() {
  Verdict v;

  // Permutation equivariance and rank invariance, 1000 randomized cases.
  std::size_t equivariant = 0, invariant = 0;
  const ScreenerId marginal[] = {ScreenerId::SIS, ScreenerId::SIRS, ScreenerId::DCSIS};
  for (std::uint64_t c = 0; c < 1000; ++c) {
    SeededStream s(110, c);
    const std::size_t n = 20 + s.below(20), p = 5 + s.below(15), m = 1 + s.below(4);
    const Matrix x = sample_uniform_design(n, p, s).matrix();
    Vector y(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = std::sin(3 * x(i, 0)) + x(i, 1) * x(i, 2) + 0.1 * s.uniform();
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), s.engine());
    const Matrix xp = permute_columns(x, perm);
    const ScreenerId id = (c % 5 < 3) ? marginal[c % 5] : (c % 5 == 3 ? ScreenerId::Lasso : ScreenerId::FOSS);
    const SeededStream st = s.child(1);
    const VariableSet a = screen(x, y, m, id, st).selected;
    const VariableSet b = screen(xp, y, m, id, st).selected;
    std::vector<std::size_t> mapped;
    for (auto j : b) mapped.push_back(perm[j]);
    if (VariableSet::from_unsorted(mapped) == a) ++equivariant;

    const Vector ty = (y.array() * 2.5 + 1.0).matrix();
    const Vector my = y.array().exp().matrix();
    bool ok = argsort(sis_scores(x, y)) == argsort(sis_scores(x, ty)) &&
              argsort(dcsis_scores(x, y)) == argsort(dcsis_scores(x, ty)) &&
              argsort(sirs_scores(x, y)) == argsort(sirs_scores(x, my));
    if (ok) ++invariant;
  }
  v.check(equivariant == 1000, "permutation equivariance " + std::to_string(equivariant) + "/1000");
  v.check(invariant == 1000, "rank invariance " + std::to_string(invariant) + "/1000");

  // Lasso KKT on every fit of several paths.
  double worst_kkt = 0.0;
  std::size_t fits = 0;
  for (std::uint64_t c = 0; c < 10; ++c) {
    SeededStream s(111, c);
    const Matrix x = sample_uniform_design(60, 120, s).matrix();
    const Vector y = eval_rows(make_test_function(TestFunctionId::Yang, 5, 120), x);
    const auto grid = lasso_grid(x, y);
    for (const auto& fit : lasso_path(x, y, grid)) {
      worst_kkt = std::max(worst_kkt, lasso_kkt_violation(x, y, fit));
      ++fits;
    }
    const auto cv = lasso_cv(x, y, 10, s.child(1));
    worst_kkt = std::max(worst_kkt, lasso_kkt_violation(x, y, cv.fit));
    ++fits;
  }
  v.check(worst_kkt < 1e-6, "KKT residual " + fmt(worst_kkt * 1e9, 3) + "e-9 over " + std::to_string(fits) + " fits");

  // Nearly sparse f = sphere(x1..x3) + eta * sin(sum x): inactive |beta_j| < 12 eta.
  const double eta = 0.05;
  const IntegrableFunction near{6, [&](std::span<const double> x) {
                                  double s = 0.0, t = 0.0;
                                  for (std::size_t j = 0; j < 3; ++j) s += (j + 1.0) * x[j] * x[j];
                                  for (double xi : x) t += xi;
                                  return s + eta * std::sin(7.0 * t);
                                }};
  const BlaResult nb = bla_closed_form(near, 1 << 16);
  double inactive = 0.0;
  for (Eigen::Index j = 3; j < 6; ++j) inactive = std::max(inactive, std::abs(nb.coefficients[j]));
  v.check(inactive < 12 * eta + 1e-3, "margin: inactive max |beta| " + fmt(inactive, 4) + " < 12 eta = " + fmt(12 * eta, 2));

  // RSS separation between supersets of the truth and sets missing an active input.
  {
    SeededStream s(112, 0);
    const TestFunction tf = make_test_function(TestFunctionId::Yang, 5, 50);
    const Matrix x = sample_uniform_design(200, 50, s).matrix();
    const Vector y = eval_rows(tf, x);
    const std::size_t m = 10;
    std::vector<std::size_t> noise(45);
    std::iota(noise.begin(), noise.end(), 5);
    double worst_super = 0.0, best_missing = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
      std::shuffle(noise.begin(), noise.end(), s.engine());
      std::vector<std::size_t> sup{0, 1, 2, 3, 4};
      sup.insert(sup.end(), noise.begin(), noise.begin() + (m - 5));
      worst_super = std::max(worst_super, rss(x, y, VariableSet::from_unsorted(sup)));
      std::shuffle(noise.begin(), noise.end(), s.engine());
      std::vector<std::size_t> miss{0, 1, 2, 3, 4};
      miss.erase(miss.begin() + static_cast<long>(s.below(5)));
      miss.insert(miss.end(), noise.begin(), noise.begin() + (m - 4));
      best_missing = std::min(best_missing, rss(x, y, VariableSet::from_unsorted(miss)));
    }
    v.check(worst_super < best_missing, "RSS separation " + fmt(worst_super, 4) + " < " + fmt(best_missing, 4));
  }

  // Exact discrepancy values: one point at 1/2, and m midpoints (2i+1)/(2m).
  double worst_disc = 0.0;
  for (std::size_t m = 1; m <= 20; ++m) {
    Matrix mids(static_cast<Eigen::Index>(m), 1);
    for (std::size_t i = 0; i < m; ++i) mids(static_cast<Eigen::Index>(i), 0) = (2.0 * i + 1.0) / (2.0 * m);
    worst_disc = std::max(worst_disc, std::abs(star_discrepancy(mids) - 0.5 / static_cast<double>(m)));
  }
  v.check(worst_disc < 1e-14, "midpoint discrepancy max error " + fmt(worst_disc * 1e15, 2) + "e-15");

  // U * U^-1 = I.
  double worst_inv = 0.0;
  for (std::size_t m = 1; m <= 10; ++m) {
    const Matrix prod = moment_matrix(m) * precision_inverse(m);
    worst_inv = std::max(worst_inv, (prod - Matrix::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff());
  }
  v.check(worst_inv <= 1e-12, "max |U U^-1 - I| " + fmt(worst_inv * 1e15, 2) + "e-15");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "function III, (100,200,30), p0=5", yang_small},
      {2, "function I, (100,1000,50), p0=10", sphere_hard},
      {3, "borehole, 5 active, (200,500,30)", borehole_five},
      {4, "borehole, 2 active, (50,100,30)", borehole_two},
      {5, "basis study, 10(x1-1/2)^2, (50,100,5)", basis_study},
      {6, "GCV-selected M, borehole (200,500)", data_driven_m},
      {7, "closed-form BLA", bla_exactness},
      {8, "FOSS vs exhaustive l0", l0_oracle},
      {9, "borehole first-order Sobol' indices", borehole_sobol},
      {10, "property suites", properties},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "error: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  (" << fmt(secs, 1)
              << " s)  " << v.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
