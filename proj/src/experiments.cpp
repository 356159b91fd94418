#include "screenlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <string>
#include <thread>

#include "screenlab/modelsel.hpp"
#include "screenlab/sampling.hpp"

namespace screenlab {

namespace {

// Stream tag for everything a repetition does after drawing its design.
constexpr std::uint64_t kMethodStreamTag = 1;

struct RepResult {
  std::uint64_t hash = 0;
  std::size_t m = 0;
  std::vector<VariableSet> selections;  // one per method
};

RepResult run_rep(const ExperimentConfig& cfg, std::size_t rep) {
  SeededStream stream = spawn_rep_stream(cfg.master_seed, rep);
  const DesignMatrix design = sample_uniform_design(cfg.n, cfg.p, stream);
  const Matrix& x = design.matrix();
  const Vector y = eval_rows(cfg.function, x);
  const SeededStream method_stream = stream.child(kMethodStreamTag);

  RepResult r;
  r.hash = hash_data(x, y);
  r.selections.resize(cfg.methods.size());

  std::optional<MSelection> auto_m;
  if (cfg.m) {
    r.m = *cfg.m;
  } else {
    auto_m = select_m(x, y, method_stream, cfg.screen);
    r.m = auto_m->m;
  }

  std::vector<ScreenerId> pending;
  std::vector<std::size_t> slot;
  for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
    if (auto_m && cfg.methods[k] == ScreenerId::FOSS) {
      r.selections[k] = auto_m->selected;
    } else {
      pending.push_back(cfg.methods[k]);
      slot.push_back(k);
    }
  }
  if (!pending.empty()) {
    auto outs = screen_all_with_policy(x, y, r.m, pending, cfg.basis, method_stream, cfg.screen);
    for (std::size_t k = 0; k < outs.size(); ++k) r.selections[slot[k]] = std::move(outs[k].selected);
  }
  return r;
}

[[noreturn]] void rethrow_tagged(std::exception_ptr err, std::size_t rep) {
  const std::string tag = "repetition " + std::to_string(rep) + ": ";
  try {
    std::rethrow_exception(err);
  } catch (const NumericError& e) {
    throw NumericError(tag + e.what());
  } catch (const InputError& e) {
    throw InputError(tag + e.what());
  } catch (const std::exception& e) {
    throw Error(tag + e.what());
  }
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw ConfigError("reps", "must be at least 1");
  if (cfg.n < 3) throw ConfigError("n", "must be at least 3");
  if (cfg.p < 1) throw ConfigError("p", "must be at least 1");
  if (cfg.methods.empty()) throw ConfigError("methods", "at least one method is required");
  if (cfg.function.p != cfg.p) throw ConfigError("p", "does not match the function's dimension");
  if (cfg.function.p0 > cfg.p) throw ConfigError("p0", "exceeds p");
  if (auto mx = cfg.function.truth.max(); mx && *mx >= cfg.p) throw ConfigError("truth", "index exceeds p");
  if (cfg.screen.lasso.folds < 2 || cfg.screen.lasso.folds > cfg.n) {
    throw ConfigError("folds", "must lie in [2, n]");
  }
  if (cfg.m) {
    if (*cfg.m < cfg.function.truth.size()) throw ConfigError("M", "is smaller than the number of active variables");
    if (*cfg.m >= cfg.n) throw ConfigError("M", "must be smaller than n");
    if (*cfg.m > cfg.p) throw ConfigError("M", "exceeds p");
  } else if (cfg.basis != BasisPolicy::Linear) {
    throw ConfigError("M", "auto requires the linear basis");
  }
}

CoverageReport run_coverage_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();

  std::vector<RepResult> results(cfg.reps);
  std::vector<std::exception_ptr> errors(cfg.reps);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t rep = next++; rep < cfg.reps && !failed; rep = next++) {
      try {
        results[rep] = run_rep(cfg, rep);
      } catch (...) {
        errors[rep] = std::current_exception();
        failed = true;
      }
    }
  };

  std::size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.reps);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t rep = 0; rep < cfg.reps; ++rep)
    if (errors[rep]) rethrow_tagged(errors[rep], rep);

  CoverageReport report;
  report.truth = cfg.function.truth;
  report.reps = cfg.reps;
  for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
    MethodCoverage mc;
    mc.method = cfg.methods[k];
    mc.inclusion.assign(report.truth.size(), 0.0);
    for (const auto& r : results) {
      const VariableSet& s = r.selections[k];
      if (s.includes(report.truth)) ++mc.hits;
      for (std::size_t t = 0; t < report.truth.size(); ++t)
        if (s.contains(report.truth[t])) mc.inclusion[t] += 1.0;
      mc.selections.push_back(s);
    }
    const auto reps = static_cast<double>(cfg.reps);
    mc.coverage = static_cast<double>(mc.hits) / reps;
    for (double& v : mc.inclusion) v /= reps;
    report.methods.push_back(std::move(mc));
  }

  double sum = 0.0, sq = 0.0;
  for (const auto& r : results) {
    report.data_hashes.push_back(r.hash);
    report.selected_m.push_back(r.m);
    sum += static_cast<double>(r.m);
  }
  report.mean_m = sum / static_cast<double>(cfg.reps);
  for (std::size_t m : report.selected_m) sq += std::pow(static_cast<double>(m) - report.mean_m, 2);
  report.sd_m = cfg.reps > 1 ? std::sqrt(sq / static_cast<double>(cfg.reps - 1)) : 0.0;

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double coverage_rate(std::span<const VariableSet> selections, const VariableSet& truth) {
  if (selections.empty()) throw InputError("coverage needs at least one selection");
  const auto hits = std::count_if(selections.begin(), selections.end(),
                                  [&](const VariableSet& s) { return s.includes(truth); });
  return static_cast<double>(hits) / static_cast<double>(selections.size());
}

std::uint64_t hash_data(const Matrix& x, const Vector& y) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const double* data, Eigen::Index count) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < static_cast<std::size_t>(count) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  feed(x.data(), x.size());
  feed(y.data(), y.size());
  return h;
}

}  // namespace screenlab
