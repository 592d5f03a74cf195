#pragma once

#include <optional>

#include "cpa/potential.hpp"
#include "cpa/solver.hpp"

namespace cpa {

/// det S = t^2 - r_left r_right for the coherent-injection 2x2 S-matrix.
Complex det_s(Complex t, Complex r_left, Complex r_right);

enum class UnimodularSign { Plus, Minus, NA };

/// Residuals of the PT structural relations at one scattering point.
/// Residual fields are unset (NA) for non-PT symmetry, at the T = 1
/// knife-edge, or where a reflection amplitude vanishes exactly.
struct SMatrixChecks {
  Complex det_s;
  double abs_det_s = 0.0;
  UnimodularSign unimodular_sign = UnimodularSign::NA;
  std::optional<double> phase_residual_left;
  std::optional<double> phase_residual_right;
  std::optional<double> unimodularity_residual;  // |T +- sqrt(R_L R_R) - 1|
};

/// For PT-symmetric potentials the transmission and reflection phases are
/// locked a quarter period apart: with T < 1 both sides share the same
/// offset from theta, with T > 1 the right-side offset flips sign. The
/// overall sign of the quarter-period offset depends on the sign
/// convention of the reflection amplitudes, so residuals are measured
/// against the nearest +-pi/2 with a common sign for both sides.
/// The unimodularity residual uses T + sqrt(R_L R_R) when T < 1 and
/// T - sqrt(R_L R_R) when T > 1.
SMatrixChecks check_pt_relations(const ScatteringPoint& point, const SymmetryClass& symmetry);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace cpa
