#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "screenlab/core.hpp"
#include "screenlab/experiments.hpp"
#include "screenlab/modelsel.hpp"

namespace screenlab {

// ---------------------------------------------------------------------------
// CSV (RFC 4180)

using CsvRow = std::vector<std::string>;

/// Parses quoted fields, doubled quotes and CRLF line ends. Throws
/// ParseError with the 1-based line where a record starts.
std::vector<CsvRow> parse_csv(std::istream& in);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);
void write_csv_row(std::ostream& out, const CsvRow& row);

/// Whole-field decimal parse (leading '+' and surrounding blanks allowed).
std::optional<double> parse_number(std::string_view text);

/// Shortest-safe decimal form: 17 significant digits, round-trips exactly.
std::string format_double(double v);

struct Dataset {
  std::vector<std::string> predictors;
  std::string response;
  DesignMatrix x;
  Vector y;
};

/// Reads a header + numeric rows CSV. Predictors are every column other
/// than `response`. Values within clip_eps outside [0, 1) are clamped into
/// the interval (1 maps to 1 - clip_eps); anything else out of range fails.
Dataset read_dataset(std::istream& in, std::string_view response = "y", double clip_eps = 0.0);
Dataset read_dataset_file(const std::string& path, std::string_view response = "y",
                          double clip_eps = 0.0);

/// Header x1..xp,y; the response is the last column.
void write_dataset(std::ostream& out, const Matrix& x, const Vector& y);

// ---------------------------------------------------------------------------
// Benchmark configs: flat `key = value` lines, `#` comments.
//
//   function = yang        n = 100     p = 200     M = 30 (or auto)
//   p0 = 5                 truth = 1,4,6,7,8 (borehole only, 1-based)
//   methods = sis, sirs, dcsis, lasso, foss
//   basis = linear | quadratic | two-stage
//   reps = 200             master_seed = 7       folds = 10   workers = 0
//   normalize_by_p = false lasso_pad = true

ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

// ---------------------------------------------------------------------------
// Reports

nlohmann::json report_json(const ExperimentConfig& cfg, const CoverageReport& report);
/// One row per method; excludes wall time so equal configs give equal bytes.
std::string report_csv(const ExperimentConfig& cfg, const CoverageReport& report);
/// Human-readable coverage table, methods as columns.
std::string report_table(const ExperimentConfig& cfg, const CoverageReport& report);

nlohmann::json outcome_json(const ScreeningOutcome& outcome, std::size_t n, std::size_t m,
                            const std::optional<MSelection>& auto_m = std::nullopt);

}  // namespace screenlab
