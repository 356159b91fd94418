#include <gtest/gtest.h>

#include "screenlab/experiments.hpp"
#include "screenlab/sampling.hpp"

using namespace screenlab;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.function = make_test_function(TestFunctionId::Yang, 3, 40);
  cfg.n = 40;
  cfg.p = 40;
  cfg.m = 8;
  cfg.reps = 12;
  cfg.master_seed = 77;
  return cfg;
}

}  // namespace

TEST(CoverageRate, Counting) {
  const VariableSet truth{0, 7};
  const std::vector<VariableSet> all{{0, 7}, {0, 3, 7}}, none{{0}, {7, 9}};
  const std::vector<VariableSet> three{{0, 7}, {0, 7, 9}, {1, 7}, {0, 2, 7}};
  EXPECT_EQ(coverage_rate(all, truth), 1.0);
  EXPECT_EQ(coverage_rate(none, truth), 0.0);
  EXPECT_EQ(coverage_rate(three, truth), 0.75);
  EXPECT_THROW(coverage_rate(std::vector<VariableSet>{}, truth), InputError);
}

TEST(Validate, RejectsBadConfigsByField) {
  auto field_of = [](ExperimentConfig cfg) {
    try {
      validate(cfg);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  ExperimentConfig c = small_config();
  EXPECT_EQ(field_of(c), "");
  c.reps = 0;
  EXPECT_EQ(field_of(c), "reps");
  c = small_config();
  c.m = 40;
  EXPECT_EQ(field_of(c), "M");
  c.m = 2;
  EXPECT_EQ(field_of(c), "M");
  c = small_config();
  c.methods.clear();
  EXPECT_EQ(field_of(c), "methods");
  c = small_config();
  c.p = 50;
  EXPECT_EQ(field_of(c), "p");
  c = small_config();
  c.m.reset();
  c.basis = BasisPolicy::TwoStage;
  EXPECT_EQ(field_of(c), "M");
}

TEST(Experiment, SingleRepOnExactSparseInstance) {
  ExperimentConfig cfg = small_config();
  cfg.function = make_test_function(TestFunctionId::WeightedSphere, 1, 40);
  cfg.reps = 1;
  const CoverageReport r = run_coverage_experiment(cfg);
  ASSERT_EQ(r.methods.size(), 5u);
  for (const auto& m : r.methods) EXPECT_EQ(m.coverage, 1.0) << to_string(m.method);
  EXPECT_EQ(r.reps, 1u);
  EXPECT_EQ(r.sd_m, 0.0);
}

TEST(Experiment, IdenticalAcrossWorkerCounts) {
  ExperimentConfig cfg = small_config();
  cfg.workers = 1;
  const CoverageReport one = run_coverage_experiment(cfg);
  cfg.workers = 4;
  const CoverageReport four = run_coverage_experiment(cfg);
  EXPECT_EQ(one.data_hashes, four.data_hashes);
  ASSERT_EQ(one.methods.size(), four.methods.size());
  for (std::size_t k = 0; k < one.methods.size(); ++k) {
    EXPECT_EQ(one.methods[k].selections, four.methods[k].selections);
    EXPECT_EQ(one.methods[k].coverage, four.methods[k].coverage);
    EXPECT_EQ(one.methods[k].inclusion, four.methods[k].inclusion);
  }
}

TEST(Experiment, HashesIdentifyTheSharedRepData) {
  const ExperimentConfig cfg = small_config();
  const CoverageReport r = run_coverage_experiment(cfg);
  ASSERT_EQ(r.data_hashes.size(), cfg.reps);
  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    SeededStream s = spawn_rep_stream(cfg.master_seed, rep);
    const Matrix x = sample_uniform_design(cfg.n, cfg.p, s).matrix();
    EXPECT_EQ(r.data_hashes[rep], hash_data(x, eval_rows(cfg.function, x)));
  }
}

TEST(Experiment, AggregatesExactly) {
  const CoverageReport r = run_coverage_experiment(small_config());
  for (const auto& m : r.methods) {
    EXPECT_EQ(m.coverage, coverage_rate(m.selections, r.truth));
    EXPECT_EQ(m.coverage, static_cast<double>(m.hits) / static_cast<double>(r.reps));
    for (double rate : m.inclusion) EXPECT_GE(rate, m.coverage);
    for (const auto& s : m.selections) EXPECT_EQ(s.size(), 8u);
  }
  EXPECT_EQ(r.mean_m, 8.0);
}

TEST(Experiment, AutoMRecordsChoices) {
  ExperimentConfig cfg = small_config();
  cfg.m.reset();
  cfg.reps = 4;
  const CoverageReport r = run_coverage_experiment(cfg);
  ASSERT_EQ(r.selected_m.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_GE(r.selected_m[k], 1u);
    EXPECT_LE(r.selected_m[k], cfg.n - 2);
    for (const auto& m : r.methods) EXPECT_EQ(m.selections[k].size(), r.selected_m[k]);
  }
}

// Weighted sphere at (100, 200, 30) with five active inputs.
TEST(Experiment, SphereDeskScaleOrdering) {
  ExperimentConfig cfg;
  cfg.function = make_test_function(TestFunctionId::WeightedSphere, 5, 200);
  cfg.n = 100;
  cfg.p = 200;
  cfg.m = 30;
  cfg.reps = 200;
  cfg.master_seed = 20240601;
  const CoverageReport r = run_coverage_experiment(cfg);
  auto cov = [&](ScreenerId id) {
    for (const auto& m : r.methods)
      if (m.method == id) return m.coverage;
    return -1.0;
  };
  std::string seen;
  for (const auto& m : r.methods) seen += std::string(to_string(m.method)) + "=" + std::to_string(m.coverage) + " ";
  SCOPED_TRACE(seen);
  EXPECT_GE(cov(ScreenerId::FOSS), 0.96);
  EXPECT_GE(cov(ScreenerId::FOSS), cov(ScreenerId::Lasso) - 0.03);
  EXPECT_GT(cov(ScreenerId::Lasso), cov(ScreenerId::SIS) - 0.03);
  EXPECT_GE(cov(ScreenerId::SIS), cov(ScreenerId::DCSIS) - 0.03);
  EXPECT_GE(cov(ScreenerId::DCSIS), cov(ScreenerId::SIRS) - 0.03);
}
