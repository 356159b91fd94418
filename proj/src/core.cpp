#include "screenlab/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <sstream>

namespace screenlab {

namespace {

void check_entries(const Matrix& values) {
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v)) {
        throw NonFiniteValue("design entry (" + std::to_string(i + 1) + ", " +
                             std::to_string(j + 1) + ") is not finite");
      }
      if (v < 0.0 || v >= 1.0) {
        throw OutOfRangeEntry(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1, v);
      }
    }
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

DesignMatrix::DesignMatrix(Matrix values) : values_(std::move(values)) {
  check_entries(values_);
  if (values_.rows() < 2 || values_.cols() < 1) {
    throw InvalidShape("design needs n >= 2 and p >= 1, got " + std::to_string(values_.rows()) +
                       "x" + std::to_string(values_.cols()));
  }
}

ResponseVector::ResponseVector(Vector values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NonFiniteValue("response " + std::to_string(i + 1) + " is not finite");
    }
  }
}

ResponseVector::ResponseVector(Vector values, const DesignMatrix& paired)
    : ResponseVector(std::move(values)) {
  if (size() != paired.n()) {
    throw DimensionMismatch("response has " + std::to_string(size()) + " values but design has " +
                            std::to_string(paired.n()) + " rows");
  }
}

VariableSet::VariableSet(std::vector<std::size_t> sorted_indices)
    : indices_(std::move(sorted_indices)) {
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k - 1] >= indices_[k]) {
      throw InputError("variable indices must be strictly increasing");
    }
  }
}

VariableSet::VariableSet(std::initializer_list<std::size_t> indices)
    : VariableSet(std::vector<std::size_t>(indices)) {}

VariableSet VariableSet::from_unsorted(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return VariableSet(std::move(indices));
}

VariableSet VariableSet::range(std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (std::size_t k = 0; k < count; ++k) idx[k] = k;
  return VariableSet(std::move(idx));
}

VariableSet VariableSet::from_one_based(const std::vector<std::size_t>& indices) {
  std::vector<std::size_t> zero;
  zero.reserve(indices.size());
  for (auto i : indices) {
    if (i == 0) throw IndexExceedsDimension("variable index 0 is invalid (indices are 1-based)");
    zero.push_back(i - 1);
  }
  return from_unsorted(std::move(zero));
}

bool VariableSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool VariableSet::includes(const VariableSet& other) const {
  return std::includes(indices_.begin(), indices_.end(), other.indices_.begin(),
                       other.indices_.end());
}

std::optional<std::size_t> VariableSet::max() const {
  if (indices_.empty()) return std::nullopt;
  return indices_.back();
}

VariableSet VariableSet::union_with(const VariableSet& other) const {
  std::vector<std::size_t> out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  return VariableSet(std::move(out));
}

VariableSet VariableSet::difference(const VariableSet& other) const {
  std::vector<std::size_t> out;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out));
  return VariableSet(std::move(out));
}

std::vector<std::size_t> VariableSet::one_based() const {
  std::vector<std::size_t> out(indices_);
  for (auto& i : out) ++i;
  return out;
}

std::string to_string(const VariableSet& set) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto i : set.one_based()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

std::string_view to_string(ScreenerId id) {
  switch (id) {
    case ScreenerId::SIS: return "L-SIS";
    case ScreenerId::SIRS: return "SIRS";
    case ScreenerId::DCSIS: return "DC-SIS";
    case ScreenerId::Lasso: return "L-Lasso";
    case ScreenerId::FOSS: return "L-FOSS";
  }
  return "?";
}

std::string_view to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::Linear: return "linear";
    case BasisTag::Quadratic: return "quadratic";
    case BasisTag::Custom: return "custom";
  }
  return "?";
}

ScreenerId parse_screener(std::string_view name) {
  const auto s = lower(name);
  if (s == "sis" || s == "l-sis") return ScreenerId::SIS;
  if (s == "sirs") return ScreenerId::SIRS;
  if (s == "dcsis" || s == "dc-sis") return ScreenerId::DCSIS;
  if (s == "lasso" || s == "l-lasso") return ScreenerId::Lasso;
  if (s == "foss" || s == "l-foss") return ScreenerId::FOSS;
  throw InputError("unknown screening method '" + std::string(name) + "'");
}

BasisTag parse_basis_tag(std::string_view name) {
  const auto s = lower(name);
  if (s == "linear") return BasisTag::Linear;
  if (s == "quadratic") return BasisTag::Quadratic;
  throw InputError("unknown basis '" + std::string(name) + "'");
}

DesignMatrix validate_design(const std::vector<std::vector<double>>& raw) {
  const std::size_t rows = raw.size();
  const std::size_t cols = rows == 0 ? 0 : raw.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    if (raw[i].size() != cols) {
      throw NonRectangular("row " + std::to_string(i + 1) + " has " +
                           std::to_string(raw[i].size()) + " entries, expected " +
                           std::to_string(cols));
    }
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = raw[i][j];
  return DesignMatrix(std::move(m));
}

DesignMatrix validate_design(const Matrix& raw) { return DesignMatrix(raw); }

Vector expand_to_full(const SubsetModel& model, std::size_t p) {
  if (static_cast<std::size_t>(model.coefficients.size()) != model.subset.size()) {
    throw DimensionMismatch("model has " + std::to_string(model.coefficients.size()) +
                            " coefficients for " + std::to_string(model.subset.size()) +
                            " variables");
  }
  if (auto mx = model.subset.max(); mx && *mx >= p) {
    throw IndexExceedsDimension("subset index " + std::to_string(*mx + 1) + " exceeds p = " +
                                std::to_string(p));
  }
  Vector full = Vector::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t k = 0; k < model.subset.size(); ++k) {
    full[static_cast<Eigen::Index>(model.subset[k])] = model.coefficients[static_cast<Eigen::Index>(k)];
  }
  return full;
}

Matrix select_columns(const Matrix& x, const VariableSet& subset) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(subset.size()));
  for (std::size_t k = 0; k < subset.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(subset[k]));
  }
  return out;
}

}  // namespace screenlab
