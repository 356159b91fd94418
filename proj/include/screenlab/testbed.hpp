#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "screenlab/bla.hpp"
#include "screenlab/core.hpp"

namespace screenlab {

enum class TestFunctionId { WeightedSphere, Ackley, Yang, Borehole, Interaction, Quad1D };

TestFunctionId parse_test_function(std::string_view name);
/// CLI spelling: sphere, ackley, yang, borehole, interaction, quad1d.
std::string_view to_string(TestFunctionId id);

/// A benchmark simulator on [0,1)^p whose output depends only on its first
/// active block; remaining coordinates are inert noise inputs.
struct TestFunction {
  TestFunctionId id = TestFunctionId::WeightedSphere;
  std::size_t p0 = 1;
  std::size_t p = 1;
  /// Ground-truth active set used for coverage (0-based).
  VariableSet truth;
  /// Ackley and Yang: average over p instead of p0 in the normalisers.
  bool normalize_by_p = false;
};

/// Builds a test function with its default truth set: {1..p0}, or all eight
/// borehole inputs. Throws DimensionTooSmall.
TestFunction make_test_function(TestFunctionId id, std::size_t p0, std::size_t p);

/// Borehole variants studied with two ({1,8}) and five ({1,4,6,7,8}) active inputs.
TestFunction borehole_with_truth(std::size_t p, const VariableSet& truth);

/// Throws DimensionMismatch when x has the wrong length.
double eval_test_function(const TestFunction& tf, std::span<const double> x);

/// Responses for every row of a design.
Vector eval_rows(const TestFunction& tf, const Matrix& x);

/// Physical borehole inputs in order r_w, r, T_u, H_u, T_l, H_l, L, K_w.
struct BoreholeInputs {
  double rw, r, tu, hu, tl, hl, l, kw;
};

inline constexpr std::array<double, 8> kBoreholeLower{0.05, 100.0, 63070.0, 990.0, 63.1, 700.0, 1120.0, 1500.0};
inline constexpr std::array<double, 8> kBoreholeUpper{0.15, 50000.0, 115600.0, 1110.0, 116.0, 820.0, 1680.0, 15000.0};

/// Affine map from [0,1)^8 to the physical ranges.
BoreholeInputs borehole_inputs(std::span<const double> u);
/// Flow rate (m^3/yr) at a physical point.
double borehole_flow(const BoreholeInputs& in);
/// Flow rate at a scaled point u in [0,1)^8.
double eval_borehole(std::span<const double> u);

/// Same function with ambient dimension p; the extra coordinates are inert.
TestFunction augment_with_noise(const TestFunction& tf, std::size_t p);

/// Adapter for quadrature-based routines.
IntegrableFunction as_integrable(const TestFunction& tf);

}  // namespace screenlab
