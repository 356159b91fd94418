#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace screenlab {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input supplied by the caller (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a result (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Indices carried by the input errors below are 1-based, matching what users
// see in files and reports.

class OutOfRangeEntry : public InputError {
 public:
  OutOfRangeEntry(std::size_t row, std::size_t col, double value)
      : InputError("design entry (" + std::to_string(row) + ", " + std::to_string(col) +
                   ") = " + std::to_string(value) + " is outside [0, 1)"),
        row_(row),
        col_(col),
        value_(value) {}

  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }
  double value() const { return value_; }

 private:
  std::size_t row_;
  std::size_t col_;
  double value_;
};

class NonRectangular : public InputError {
 public:
  using InputError::InputError;
};

class NonFiniteValue : public InputError {
 public:
  using InputError::InputError;
};

class InvalidShape : public InputError {
 public:
  using InputError::InputError;
};

class IndexExceedsDimension : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class DimensionTooSmall : public InputError {
 public:
  using InputError::InputError;
};

class SubsetTooLarge : public InputError {
 public:
  using InputError::InputError;
};

class TooManySubsets : public InputError {
 public:
  using InputError::InputError;
};

class TooLarge : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public InputError {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : InputError("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class NonFiniteEvaluation : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonFiniteBasisValue : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularGram : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoConvergence : public NumericError {
 public:
  explicit NoConvergence(double lambda)
      : NumericError("coordinate descent did not converge at lambda = " +
                     std::to_string(lambda)),
        lambda_(lambda) {}
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

class ZeroVariance : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace screenlab
