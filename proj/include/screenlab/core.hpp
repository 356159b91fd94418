#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "screenlab/errors.hpp"

namespace screenlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// n x p matrix of scaled inputs; rows are runs, columns are variables.
/// Every entry lies in [0, 1). Immutable after construction.
class DesignMatrix {
 public:
  /// Validates and takes ownership. Throws InvalidShape, NonFiniteValue or
  /// OutOfRangeEntry.
  explicit DesignMatrix(Matrix values);

  std::size_t n() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& matrix() const { return values_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Matrix values_;
};

/// Simulator outputs paired with a DesignMatrix. All values finite.
class ResponseVector {
 public:
  explicit ResponseVector(Vector values);
  ResponseVector(Vector values, const DesignMatrix& paired);

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  const Vector& vector() const { return values_; }

 private:
  Vector values_;
};

/// Sorted set of distinct variable indices.
///
/// Indices are 0-based inside the library; reports and files use the 1-based
/// numbering returned by one_based().
class VariableSet {
 public:
  VariableSet() = default;
  /// Requires strictly increasing input; throws InputError otherwise.
  explicit VariableSet(std::vector<std::size_t> sorted_indices);
  VariableSet(std::initializer_list<std::size_t> indices);

  /// Sorts and removes duplicates.
  static VariableSet from_unsorted(std::vector<std::size_t> indices);
  /// {0, ..., count - 1}
  static VariableSet range(std::size_t count);
  /// Converts 1-based indices; throws IndexExceedsDimension on 0.
  static VariableSet from_one_based(const std::vector<std::size_t>& indices);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t index) const;
  /// True when every index of `other` is also in this set.
  bool includes(const VariableSet& other) const;
  std::optional<std::size_t> max() const;

  VariableSet union_with(const VariableSet& other) const;
  VariableSet difference(const VariableSet& other) const;

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::vector<std::size_t> one_based() const;
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }

  friend bool operator==(const VariableSet&, const VariableSet&) = default;
  friend auto operator<=>(const VariableSet&, const VariableSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

std::string to_string(const VariableSet& set);

/// Least-squares fit of the intercept plus the columns in `subset`.
struct SubsetModel {
  VariableSet subset;
  double intercept = 0.0;
  Vector coefficients;  // coefficients[k] belongs to subset[k]
  double rss = 0.0;
};

enum class ScreenerId { SIS, SIRS, DCSIS, Lasso, FOSS };

/// Which basis produced a screening outcome.
enum class BasisTag { Linear, Quadratic, Custom };

std::string_view to_string(ScreenerId id);
std::string_view to_string(BasisTag tag);
/// Accepts sis, sirs, dcsis, lasso, foss (case-insensitive).
ScreenerId parse_screener(std::string_view name);
/// Accepts linear, quadratic.
BasisTag parse_basis_tag(std::string_view name);

struct ScreeningOutcome {
  Vector scores;          // length p, method-specific importance
  VariableSet selected;   // size M except when a Lasso fit activates fewer
  ScreenerId method = ScreenerId::SIS;
  BasisTag basis = BasisTag::Linear;
  /// Set by two-stage screening when the two RSS values were within 1e-12.
  bool tie_broken = false;
  /// RSS of the least-squares refit on `selected` when computed.
  std::optional<double> rss;
};

/// Rejects ragged rows, non-finite values and entries outside [0, 1).
DesignMatrix validate_design(const std::vector<std::vector<double>>& raw);
DesignMatrix validate_design(const Matrix& raw);

/// Places model coefficients at their subset positions of a length-p vector;
/// every other component is exactly zero.
Vector expand_to_full(const SubsetModel& model, std::size_t p);

/// Extracts the columns in `subset` (in order).
Matrix select_columns(const Matrix& x, const VariableSet& subset);

}  // namespace screenlab
