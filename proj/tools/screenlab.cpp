// screenlab: variable screening for computer experiments with p > n.
//
//   screenlab screen data.csv --method foss --m 30
//   screenlab bench configs/yang_five_active.toml --out results/
//   screenlab generate --function borehole --n 50 --p 100 --out data.csv
//   screenlab bla --function quad1d
//   screenlab discrepancy points.csv
//   screenlab sobol --function borehole --samples 65536
//
// Exit status: 0 success, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "screenlab/basis.hpp"
#include "screenlab/bla.hpp"
#include "screenlab/diagnostics.hpp"
#include "screenlab/experiments.hpp"
#include "screenlab/io.hpp"
#include "screenlab/modelsel.hpp"
#include "screenlab/sampling.hpp"
#include "screenlab/testbed.hpp"

namespace fs = std::filesystem;
using namespace screenlab;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

// --seed beats SCREENLAB_SEED, which beats a config file value.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SCREENLAB_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError("SCREENLAB_SEED must be a non-negative integer");
  }
  return fallback;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + out_path + "'");
  out << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// p = 0 means "just the active inputs".
TestFunction function_from_flags(const std::string& name, std::size_t p0, std::size_t p) {
  const TestFunctionId id = parse_test_function(name);
  if (p == 0) p = make_test_function(id, p0, std::max<std::size_t>(p0, 8)).p0;
  return make_test_function(id, p0, p);
}

struct ScreenArgs {
  std::string file;
  std::string method = "foss";
  std::string m = "auto";
  std::string basis = "linear";
  std::size_t folds = 10;
  std::string response = "y";
  double clip_eps = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_screen(const ScreenArgs& a) {
  const Dataset data = read_dataset_file(a.file, a.response, a.clip_eps);
  const Matrix& x = data.x.matrix();
  const ScreenerId method = parse_screener(a.method);
  const BasisPolicy policy = parse_basis_policy(a.basis);
  const SeededStream stream(resolve_seed(a.seed, kDefaultSeed), 0);
  ScreenOptions opts;
  opts.lasso.folds = a.folds;

  std::optional<MSelection> auto_m;
  std::size_t m = 0;
  if (a.m == "auto") {
    if (policy != BasisPolicy::Linear) throw InputError("--m auto requires --basis linear");
    if (data.x.n() < 4) throw InputError("--m auto needs at least 4 runs");
    auto_m = select_m(x, data.y, stream, opts);
    m = auto_m->m;
  } else {
    try {
      std::size_t used = 0;
      m = std::stoul(a.m, &used);
      if (used != a.m.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw InputError("--m must be a positive integer or 'auto', got '" + a.m + "'");
    }
    if (m < 1) throw InputError("--m must be at least 1");
  }

  ScreeningOutcome outcome;
  if (auto_m && method == ScreenerId::FOSS) {
    outcome = foss_screen(x, data.y, m, auto_m->selected, opts.foss);
  } else {
    outcome = screen_with_policy(x, data.y, m, method, policy, stream, opts);
  }
  if (!outcome.rss && outcome.basis == BasisTag::Linear && m < data.x.n())
    outcome.rss = rss(x, data.y, outcome.selected);
  nlohmann::json j = outcome_json(outcome, data.x.n(), m, auto_m);
  j["predictors"] = data.predictors;
  j["response"] = data.response;
  emit(dump(j), a.out);
  return 0;
}

struct BenchArgs {
  std::string config;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  ExperimentConfig cfg = load_experiment_config(a.config);
  if (a.reps) cfg.reps = *a.reps;
  if (a.workers) cfg.workers = *a.workers;
  cfg.master_seed = resolve_seed(a.seed, cfg.master_seed);
  validate(cfg);
  const CoverageReport report = run_coverage_experiment(cfg);
  std::cout << report_table(cfg, report);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    emit(report_csv(cfg, report), (fs::path(a.out) / "coverage.csv").string());
    emit(dump(report_json(cfg, report)), (fs::path(a.out) / "coverage.json").string());
  }
  return 0;
}

struct GenerateArgs {
  std::string function = "borehole";
  std::size_t n = 50;
  std::size_t p = 100;
  std::size_t p0 = 8;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  const TestFunction tf = function_from_flags(a.function, a.p0, a.p);
  if (a.n < 2) throw InputError("--n must be at least 2");
  SeededStream stream(resolve_seed(a.seed, kDefaultSeed), 0);
  const DesignMatrix design = sample_uniform_design(a.n, tf.p, stream);
  const Vector y = eval_rows(tf, design.matrix());
  std::ostringstream os;
  write_dataset(os, design.matrix(), y);
  emit(os.str(), a.out);
  return 0;
}

struct BlaArgs {
  std::string function = "quad1d";
  std::size_t p0 = 1;
  std::size_t p = 0;
  std::string basis = "linear";
  std::size_t quadrature = 1 << 16;
  std::string out;
};

int cmd_bla(const BlaArgs& a) {
  const TestFunction tf = function_from_flags(a.function, a.p0, a.p);
  const IntegrableFunction f = as_integrable(tf);
  nlohmann::json j;
  j["function"] = std::string(to_string(tf.id));
  j["p"] = tf.p;
  j["basis"] = a.basis;
  if (a.basis == "linear") {
    const BlaResult r = bla_closed_form(f, a.quadrature);
    j["intercept"] = r.intercept;
    j["coefficients"] = std::vector<double>(r.coefficients.data(), r.coefficients.data() + r.coefficients.size());
    j["margins"] = std::vector<double>(r.margins.data(), r.margins.data() + r.margins.size());
    j["integral"] = r.integral;
    j["quadrature_points"] = r.quadrature_points;
  } else if (a.basis == "quadratic") {
    std::vector<double> margins;
    for (std::size_t k = 0; k < tf.p; ++k)
      margins.push_back(general_bla_coefficient(f, k, BasisKind::quadratic(), a.quadrature));
    j["margins"] = margins;
  } else {
    throw InputError("--basis must be linear or quadratic");
  }
  emit(dump(j), a.out);
  return 0;
}

int cmd_discrepancy(const std::string& file, const std::string& out) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open '" + file + "'");
  std::vector<CsvRow> rows = parse_csv(in);
  if (rows.empty()) throw ParseError(1, "no points");
  // A header row is optional.
  const std::size_t first = rows[0].empty() || !parse_number(rows[0][0]) ? 1 : 0;
  const auto m = static_cast<Eigen::Index>(rows.size() - first);
  if (m < 1) throw ParseError(1, "no points");
  const auto d = static_cast<Eigen::Index>(rows[first].size());
  Matrix pts(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const CsvRow& r = rows[first + static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(r.size()) != d) throw ParseError(first + i + 1, "ragged row");
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto v = parse_number(r[static_cast<std::size_t>(k)]);
      if (!v) throw ParseError(first + i + 1, "field '" + r[static_cast<std::size_t>(k)] + "' is not a number");
      pts(i, k) = *v;
    }
  }
  nlohmann::json j;
  j["m"] = m;
  j["d"] = d;
  j["discrepancy"] = star_discrepancy(pts);
  emit(dump(j), out);
  return 0;
}

struct SobolArgs {
  std::string function = "borehole";
  std::size_t p0 = 8;
  std::size_t p = 0;
  std::size_t samples = 1 << 16;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_sobol(const SobolArgs& a) {
  const TestFunction tf = function_from_flags(a.function, a.p0, a.p);
  SeededStream stream(resolve_seed(a.seed, kDefaultSeed), 0);
  const Vector s = sobol_first_order(as_integrable(tf), a.samples, stream);
  nlohmann::json j;
  j["function"] = std::string(to_string(tf.id));
  j["samples"] = a.samples;
  j["first_order"] = std::vector<double>(s.data(), s.data() + s.size());
  emit(dump(j), a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear variable screening for computer experiments"};
  app.require_subcommand(1);

  ScreenArgs sa;
  auto* screen = app.add_subcommand("screen", "Screen a CSV dataset");
  screen->add_option("dataset", sa.file, "CSV with header; predictors in [0,1)")->required();
  screen->add_option("--method", sa.method, "sis, sirs, dcsis, lasso or foss")->capture_default_str();
  screen->add_option("--m", sa.m, "Screening size or 'auto' (GCV)")->capture_default_str();
  screen->add_option("--basis", sa.basis, "linear, quadratic or two-stage")->capture_default_str();
  screen->add_option("--folds", sa.folds, "Lasso cross-validation folds")->capture_default_str();
  screen->add_option("--response", sa.response, "Response column name")->capture_default_str();
  screen->add_option("--clip-eps", sa.clip_eps, "Clamp predictors within eps of [0,1)")->capture_default_str();
  screen->add_option("--seed", sa.seed, "Random seed (overrides SCREENLAB_SEED)");
  screen->add_option("--out", sa.out, "Write JSON here instead of stdout");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a coverage experiment from a config file");
  bench->add_option("config", ba.config, "key = value config file")->required();
  bench->add_option("--reps", ba.reps, "Override the repetition count");
  bench->add_option("--workers", ba.workers, "Worker threads (default: all cores)");
  bench->add_option("--seed", ba.seed, "Master seed (overrides SCREENLAB_SEED and the config)");
  bench->add_option("--out", ba.out, "Directory for coverage.csv and coverage.json");

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "Sample a uniform design and evaluate a test function");
  generate->add_option("--function", ga.function, "sphere, ackley, yang, borehole, interaction, quad1d")
      ->capture_default_str();
  generate->add_option("--n", ga.n, "Runs")->capture_default_str();
  generate->add_option("--p", ga.p, "Inputs, including inert ones")->capture_default_str();
  generate->add_option("--p0", ga.p0, "Active inputs (sphere, ackley, yang)")->capture_default_str();
  generate->add_option("--seed", ga.seed, "Random seed");
  generate->add_option("--out", ga.out, "Output CSV (default stdout)");

  BlaArgs la;
  auto* bla = app.add_subcommand("bla", "Best linear approximation of a test function");
  bla->add_option("--function", la.function)->capture_default_str();
  bla->add_option("--p0", la.p0)->capture_default_str();
  bla->add_option("--p", la.p, "Dimension (default: active inputs only)");
  bla->add_option("--basis", la.basis, "linear or quadratic")->capture_default_str();
  bla->add_option("--quadrature", la.quadrature, "Quadrature points (>= 1024)")->capture_default_str();
  bla->add_option("--out", la.out);

  std::string disc_file, disc_out;
  auto* disc = app.add_subcommand("discrepancy", "Exact star discrepancy of a small point set");
  disc->add_option("points", disc_file, "CSV of points, one per row (d <= 3, m <= 200)")->required();
  disc->add_option("--out", disc_out);

  SobolArgs so;
  auto* sobol = app.add_subcommand("sobol", "First-order Sobol' indices by pick-freeze Monte Carlo");
  sobol->add_option("--function", so.function)->capture_default_str();
  sobol->add_option("--p0", so.p0)->capture_default_str();
  sobol->add_option("--p", so.p);
  sobol->add_option("--samples", so.samples, "Base sample size N (>= 1024)")->capture_default_str();
  sobol->add_option("--seed", so.seed);
  sobol->add_option("--out", so.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*screen) return cmd_screen(sa);
    if (*bench) return cmd_bench(ba);
    if (*generate) return cmd_generate(ga);
    if (*bla) return cmd_bla(la);
    if (*disc) return cmd_discrepancy(disc_file, disc_out);
    if (*sobol) return cmd_sobol(so);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
