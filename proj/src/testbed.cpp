#include "screenlab/testbed.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace screenlab {

namespace {

constexpr std::size_t kBoreholeInputs = 8;

std::size_t required_active(TestFunctionId id, std::size_t p0) {
  switch (id) {
    case TestFunctionId::Borehole: return kBoreholeInputs;
    case TestFunctionId::Interaction: return 2;
    case TestFunctionId::Quad1D: return 1;
    default: return p0;
  }
}

}  // namespace

TestFunctionId parse_test_function(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "sphere" || s == "weighted-sphere" || s == "1" || s == "i") return TestFunctionId::WeightedSphere;
  if (s == "ackley" || s == "2" || s == "ii") return TestFunctionId::Ackley;
  if (s == "yang" || s == "3" || s == "iii") return TestFunctionId::Yang;
  if (s == "borehole") return TestFunctionId::Borehole;
  if (s == "interaction") return TestFunctionId::Interaction;
  if (s == "quad1d") return TestFunctionId::Quad1D;
  throw InputError("unknown test function '" + std::string(name) + "'");
}

std::string_view to_string(TestFunctionId id) {
  switch (id) {
    case TestFunctionId::WeightedSphere: return "sphere";
    case TestFunctionId::Ackley: return "ackley";
    case TestFunctionId::Yang: return "yang";
    case TestFunctionId::Borehole: return "borehole";
    case TestFunctionId::Interaction: return "interaction";
    case TestFunctionId::Quad1D: return "quad1d";
  }
  return "?";
}

TestFunction make_test_function(TestFunctionId id, std::size_t p0, std::size_t p) {
  TestFunction tf;
  tf.id = id;
  tf.p0 = required_active(id, p0);
  if (tf.p0 < 1) throw DimensionTooSmall("p0 must be at least 1");
  if (p < tf.p0) {
    throw DimensionTooSmall("p = " + std::to_string(p) + " is smaller than the " +
                            std::to_string(tf.p0) + " active inputs of " + std::string(to_string(id)));
  }
  tf.p = p;
  tf.truth = VariableSet::range(tf.p0);
  return tf;
}

TestFunction borehole_with_truth(std::size_t p, const VariableSet& truth) {
  TestFunction tf = make_test_function(TestFunctionId::Borehole, kBoreholeInputs, p);
  if (auto mx = truth.max(); mx && *mx >= kBoreholeInputs) {
    throw IndexExceedsDimension("borehole truth must lie within its eight inputs");
  }
  tf.truth = truth;
  return tf;
}

BoreholeInputs borehole_inputs(std::span<const double> u) {
  std::array<double, 8> v{};
  for (std::size_t k = 0; k < kBoreholeInputs; ++k)
    v[k] = kBoreholeLower[k] + u[k] * (kBoreholeUpper[k] - kBoreholeLower[k]);
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

double borehole_flow(const BoreholeInputs& in) {
  const double log_ratio = std::log(in.r / in.rw);
  const double denom =
      log_ratio * (1.0 + 2.0 * in.l * in.tu / (log_ratio * in.rw * in.rw * in.kw) + in.tu / in.tl);
  return 2.0 * std::numbers::pi * in.tu * (in.hu - in.hl) / denom;
}

double eval_borehole(std::span<const double> u) {
  if (u.size() < kBoreholeInputs) throw DimensionMismatch("borehole needs 8 inputs");
  return borehole_flow(borehole_inputs(u));
}

double eval_test_function(const TestFunction& tf, std::span<const double> x) {
  if (x.size() != tf.p) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, function expects " +
                            std::to_string(tf.p));
  }
  const std::size_t k = tf.p0;
  switch (tf.id) {
    case TestFunctionId::WeightedSphere: {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += static_cast<double>(j + 1) * x[j] * x[j];
      return s;
    }
    case TestFunctionId::Ackley: {
      const double norm = static_cast<double>(tf.normalize_by_p ? tf.p : k);
      double sq = 0.0, lin = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        sq += x[j] * x[j];
        lin += 2.0 * std::numbers::pi * x[j];
      }
      return -20.0 * std::exp(-0.2 * std::sqrt(sq / norm)) - std::exp(lin / norm) + 20.0 + std::numbers::e;
    }
    case TestFunctionId::Yang: {
      double s = 0.0, sn = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        s += x[j];
        sn += std::sin(x[j] * x[j]);
      }
      return s * std::exp(-sn);
    }
    case TestFunctionId::Borehole:
      return eval_borehole(x.first(kBoreholeInputs));
    case TestFunctionId::Interaction:
      return (x[0] - 0.5) * (x[1] - 0.5);
    case TestFunctionId::Quad1D:
      return 10.0 * (x[0] - 0.5) * (x[0] - 0.5);
  }
  throw InputError("unknown test function");
}

Vector eval_rows(const TestFunction& tf, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != tf.p) {
    throw DimensionMismatch("design has " + std::to_string(x.cols()) + " columns, function expects " +
                            std::to_string(tf.p));
  }
  Vector y(x.rows());
  std::vector<double> row(tf.p);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < tf.p; ++j) row[j] = x(i, static_cast<Eigen::Index>(j));
    y[i] = eval_test_function(tf, row);
  }
  return y;
}

TestFunction augment_with_noise(const TestFunction& tf, std::size_t p) {
  if (p < tf.p0) {
    throw DimensionTooSmall("cannot augment to p = " + std::to_string(p) + " below " +
                            std::to_string(tf.p0) + " active inputs");
  }
  TestFunction out = tf;
  out.p = p;
  return out;
}

IntegrableFunction as_integrable(const TestFunction& tf) {
  return IntegrableFunction{tf.p, [tf](std::span<const double> x) { return eval_test_function(tf, x); }};
}

}  // namespace screenlab
