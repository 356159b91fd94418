#include "screenlab/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace screenlab {

// ---------------------------------------------------------------------------
// CSV

std::vector<CsvRow> parse_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;      // inside a quoted field
  bool was_quoted = false;  // current field started with a quote
  bool any = false;         // current record has content
  std::size_t line = 1, record_line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
    any = false;
  };

  char c;
  while (in.get(c)) {
    if (!any) {
      record_line = line;
      any = true;
    }
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || was_quoted) throw ParseError(line, "stray quote inside an unquoted field");
        quoted = true;
        was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (in.peek() != '\n') throw ParseError(line, "bare carriage return");
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (was_quoted) throw ParseError(line, "text after a closing quote");
        field.push_back(c);
    }
  }
  if (quoted) throw ParseError(record_line, "unterminated quoted field");
  if (any) end_record();
  return rows;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const CsvRow& row) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) out << ',';
    out << csv_field(row[k]);
  }
  out << '\n';
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double clip(double v, double eps, std::size_t row, std::size_t col) {
  if (!std::isfinite(v)) {
    throw NonFiniteValue("non-finite value at row " + std::to_string(row) + ", column " + std::to_string(col));
  }
  if (v >= 0.0 && v < 1.0) return v;
  if (eps > 0.0) {
    if (v < 0.0 && v >= -eps) return 0.0;
    if (v >= 1.0 && v <= 1.0 + eps) return 1.0 - eps;
  }
  throw OutOfRangeEntry(row, col, v);
}

}  // namespace

std::optional<double> parse_number(std::string_view text) {
  const std::string t = trim(std::string(text));
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

Dataset read_dataset(std::istream& in, std::string_view response, double clip_eps) {
  if (!(clip_eps >= 0.0 && clip_eps < 1.0)) throw InputError("clip-eps must lie in [0, 1)");
  const std::vector<CsvRow> rows = parse_csv(in);
  if (rows.empty()) throw ParseError(1, "missing header row");
  const CsvRow& header = rows.front();
  std::size_t resp = header.size();
  for (std::size_t k = 0; k < header.size(); ++k)
    if (trim(header[k]) == response) resp = k;
  if (resp == header.size()) throw InputError("response column '" + std::string(response) + "' not found");
  if (header.size() < 2) throw InvalidShape("dataset needs at least one predictor column");

  const auto n = static_cast<Eigen::Index>(rows.size() - 1);
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  Matrix x(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CsvRow& r = rows[static_cast<std::size_t>(i) + 1];
    const std::size_t line = static_cast<std::size_t>(i) + 2;
    if (r.size() != header.size()) {
      throw ParseError(line, "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(r.size()));
    }
    Eigen::Index j = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const auto v = parse_number(r[k]);
      if (!v) throw ParseError(line, "field '" + r[k] + "' is not a number");
      if (k == resp) {
        if (!std::isfinite(*v)) throw NonFiniteValue("non-finite response at line " + std::to_string(line));
        y[i] = *v;
      } else {
        x(i, j) = clip(*v, clip_eps, static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1);
        ++j;
      }
    }
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < header.size(); ++k)
    if (k != resp) names.push_back(trim(header[k]));
  DesignMatrix design(std::move(x));
  return Dataset{std::move(names), std::string(response), std::move(design), std::move(y)};
}

Dataset read_dataset_file(const std::string& path, std::string_view response, double clip_eps) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_dataset(in, response, clip_eps);
}

void write_dataset(std::ostream& out, const Matrix& x, const Vector& y) {
  CsvRow row;
  for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back("x" + std::to_string(j + 1));
  row.push_back("y");
  write_csv_row(out, row);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(format_double(x(i, j)));
    row.push_back(format_double(y[i]));
    write_csv_row(out, row);
  }
}

// ---------------------------------------------------------------------------
// Config

namespace {

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> split_list(std::string v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw InputError("unterminated list");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::string> items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::uint64_t parse_count(const std::string& field, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError(field, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& field, const std::string& v) {
  const std::string l = lower(v);
  if (l == "true" || l == "1" || l == "yes") return true;
  if (l == "false" || l == "0" || l == "no") return false;
  throw ConfigError(field, "expected true or false, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    bool in_quote = false;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      if (raw[k] == '"') in_quote = !in_quote;
      if (raw[k] == '#' && !in_quote) {
        raw.resize(k);
        break;
      }
    }
    const std::string t = trim(raw);
    if (t.empty() || t.front() == '[') continue;  // blank, comment, or table header
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    std::string key = lower(trim(t.substr(0, eq)));
    const std::string value = unquote(trim(t.substr(eq + 1)));
    if (key.empty()) throw ParseError(line, "empty key");
    if (key == "m") key = "M";
    if (!kv.emplace(key, value).second) throw ConfigError(key, "given more than once");
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto require = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigError(key, "is required");
    return *v;
  };

  ExperimentConfig cfg;
  TestFunctionId id{};
  const std::string fname = require("function");
  try {
    id = parse_test_function(fname);
  } catch (const InputError&) {
    throw ConfigError("function", "unknown test function '" + fname + "'");
  }
  cfg.n = parse_count("n", require("n"));
  cfg.p = parse_count("p", require("p"));
  const std::string m = require("M");
  if (lower(m) == "auto") {
    cfg.m.reset();
  } else {
    cfg.m = parse_count("M", m);
  }
  std::size_t p0 = 1;
  if (auto v = take("p0")) p0 = parse_count("p0", *v);
  if (p0 < 1) throw ConfigError("p0", "must be at least 1");
  try {
    cfg.function = make_test_function(id, p0, cfg.p);
  } catch (const InputError& e) {
    throw ConfigError("p", e.what());
  }
  if (auto v = take("truth")) {
    if (id != TestFunctionId::Borehole) throw ConfigError("truth", "only the borehole function takes a truth set");
    std::vector<std::size_t> idx;
    for (const auto& item : split_list(*v)) idx.push_back(parse_count("truth", item));
    try {
      cfg.function = borehole_with_truth(cfg.p, VariableSet::from_one_based(idx));
    } catch (const InputError& e) {
      throw ConfigError("truth", e.what());
    }
  }
  if (auto v = take("normalize_by_p")) cfg.function.normalize_by_p = parse_bool("normalize_by_p", *v);
  if (auto v = take("methods")) {
    cfg.methods.clear();
    for (const auto& item : split_list(*v)) {
      try {
        cfg.methods.push_back(parse_screener(item));
      } catch (const InputError&) {
        throw ConfigError("methods", "unknown method '" + item + "'");
      }
    }
  }
  if (auto v = take("basis")) {
    try {
      cfg.basis = parse_basis_policy(*v);
    } catch (const InputError&) {
      throw ConfigError("basis", "unknown basis '" + *v + "'");
    }
  }
  if (auto v = take("reps")) cfg.reps = parse_count("reps", *v);
  if (auto v = take("master_seed")) cfg.master_seed = parse_count("master_seed", *v);
  if (auto v = take("folds")) cfg.screen.lasso.folds = parse_count("folds", *v);
  if (auto v = take("workers")) cfg.workers = parse_count("workers", *v);
  if (auto v = take("lasso_pad")) cfg.screen.lasso.pad_to_m = parse_bool("lasso_pad", *v);
  if (!kv.empty()) throw ConfigError(kv.begin()->first, "unknown key");

  validate(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string m_label(const ExperimentConfig& cfg) {
  return cfg.m ? std::to_string(*cfg.m) : std::string("auto");
}

nlohmann::json m_json(const ExperimentConfig& cfg) {
  return cfg.m ? nlohmann::json(*cfg.m) : nlohmann::json("auto");
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

nlohmann::json report_json(const ExperimentConfig& cfg, const CoverageReport& report) {
  nlohmann::json j;
  j["function"] = std::string(to_string(cfg.function.id));
  j["n"] = cfg.n;
  j["p"] = cfg.p;
  j["M"] = m_json(cfg);
  j["p0"] = report.truth.size();
  j["truth"] = report.truth.one_based();
  j["basis"] = std::string(to_string(cfg.basis));
  j["reps"] = report.reps;
  j["master_seed"] = cfg.master_seed;
  j["wall_seconds"] = report.wall_seconds;
  j["methods"] = nlohmann::json::array();
  for (const auto& mc : report.methods) {
    nlohmann::json m;
    m["method"] = std::string(to_string(mc.method));
    m["coverage"] = mc.coverage;
    m["hits"] = mc.hits;
    nlohmann::json inc = nlohmann::json::array();
    for (std::size_t t = 0; t < report.truth.size(); ++t)
      inc.push_back({{"variable", report.truth[t] + 1}, {"rate", mc.inclusion[t]}});
    m["inclusion"] = inc;
    j["methods"].push_back(m);
  }
  j["selected_m"] = {{"mean", report.mean_m}, {"sd", report.sd_m}, {"values", report.selected_m}};
  nlohmann::json hashes = nlohmann::json::array();
  for (auto h : report.data_hashes) hashes.push_back(hex(h));
  j["data_hashes"] = hashes;
  return j;
}

std::string report_csv(const ExperimentConfig& cfg, const CoverageReport& report) {
  std::ostringstream out;
  CsvRow header{"method", "function", "basis", "n", "p", "M", "p0", "reps", "hits", "coverage", "mean_m"};
  for (auto v : report.truth) header.push_back("include_x" + std::to_string(v + 1));
  write_csv_row(out, header);
  for (const auto& mc : report.methods) {
    CsvRow row{std::string(to_string(mc.method)),
               std::string(to_string(cfg.function.id)),
               std::string(to_string(cfg.basis)),
               std::to_string(cfg.n),
               std::to_string(cfg.p),
               m_label(cfg),
               std::to_string(report.truth.size()),
               std::to_string(report.reps),
               std::to_string(mc.hits),
               format_double(mc.coverage),
               format_double(report.mean_m)};
    for (double r : mc.inclusion) row.push_back(format_double(r));
    write_csv_row(out, row);
  }
  return out.str();
}

std::string report_table(const ExperimentConfig& cfg, const CoverageReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(18) << "(n,p,M)" << std::setw(5) << "p0";
  for (const auto& mc : report.methods) out << std::right << std::setw(10) << to_string(mc.method);
  out << '\n';
  const std::string nmp = "(" + std::to_string(cfg.n) + "," + std::to_string(cfg.p) + "," + m_label(cfg) + ")";
  out << std::left << std::setw(18) << nmp << std::setw(5) << report.truth.size();
  out << std::fixed << std::setprecision(3);
  for (const auto& mc : report.methods) out << std::right << std::setw(10) << mc.coverage;
  out << '\n';
  return out.str();
}

nlohmann::json outcome_json(const ScreeningOutcome& outcome, std::size_t n, std::size_t m,
                            const std::optional<MSelection>& auto_m) {
  nlohmann::json j;
  j["method"] = std::string(to_string(outcome.method));
  j["basis"] = std::string(to_string(outcome.basis));
  j["n"] = n;
  j["p"] = outcome.scores.size();
  j["M"] = m;
  j["selected"] = outcome.selected.one_based();
  j["scores"] = std::vector<double>(outcome.scores.data(), outcome.scores.data() + outcome.scores.size());
  j["tie_broken"] = outcome.tie_broken;
  if (outcome.rss) j["rss"] = *outcome.rss;
  if (auto_m) {
    j["selected_m"] = auto_m->m;
    j["gcv"] = auto_m->gcv;
    j["gcv_interval"] = {auto_m->lower, auto_m->upper};
    j["gcv_curve"] = auto_m->gcv_curve;
  }
  return j;
}

}  // namespace screenlab
