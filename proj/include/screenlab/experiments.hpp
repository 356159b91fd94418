#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "screenlab/basis.hpp"
#include "screenlab/core.hpp"
#include "screenlab/screeners.hpp"
#include "screenlab/testbed.hpp"

namespace screenlab {

struct ExperimentConfig {
  TestFunction function;
  std::size_t n = 100;
  std::size_t p = 200;
  /// Screening size; empty means M is chosen per repetition by GCV.
  std::optional<std::size_t> m = 30;
  std::vector<ScreenerId> methods{ScreenerId::SIS, ScreenerId::SIRS, ScreenerId::DCSIS,
                                  ScreenerId::Lasso, ScreenerId::FOSS};
  BasisPolicy basis = BasisPolicy::Linear;
  std::size_t reps = 200;
  std::uint64_t master_seed = 20240601;
  /// Worker threads; 0 uses the available cores. Never affects results.
  std::size_t workers = 0;
  ScreenOptions screen;
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

struct MethodCoverage {
  ScreenerId method = ScreenerId::SIS;
  std::size_t hits = 0;
  double coverage = 0.0;
  /// Inclusion rate of each truth variable, in truth order.
  std::vector<double> inclusion;
  /// Selected set of every repetition, in rep order.
  std::vector<VariableSet> selections;
};

struct CoverageReport {
  std::vector<MethodCoverage> methods;
  VariableSet truth;
  std::size_t reps = 0;
  double wall_seconds = 0.0;
  /// FNV-1a hash of each repetition's (X, y), identical for every method.
  std::vector<std::uint64_t> data_hashes;
  /// Screening size used in each repetition.
  std::vector<std::size_t> selected_m;
  double mean_m = 0.0;
  double sd_m = 0.0;
};

/// Each repetition draws its design from spawn_rep_stream(master_seed, rep)
/// and runs every method on the same data. A failing repetition aborts the
/// run; the rethrown error keeps its category and names the rep.
CoverageReport run_coverage_experiment(const ExperimentConfig& cfg);

/// Fraction of selections that include `truth`. Requires a nonempty list.
double coverage_rate(std::span<const VariableSet> selections, const VariableSet& truth);

/// FNV-1a over the raw bytes of X then y.
std::uint64_t hash_data(const Matrix& x, const Vector& y);

}  // namespace screenlab
