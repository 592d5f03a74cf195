#include "cpa/smatrix.hpp"

#include <cmath>

namespace cpa {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kUnitTol = 1e-9;    // T = 1 knife-edge
constexpr double kZeroAmp = 1e-14;   // reflectionless: phase undefined
}  // namespace

Complex det_s(Complex t, Complex r_left, Complex r_right) {
  return t * t - r_left * r_right;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

SMatrixChecks check_pt_relations(const ScatteringPoint& point, const SymmetryClass& symmetry) {
  SMatrixChecks out;
  out.det_s = det_s(point.t, point.r_left, point.r_right);
  out.abs_det_s = std::abs(out.det_s);

  if (symmetry.kind != SymmetryKind::PTSymmetric) return out;
  if (std::abs(point.T - 1.0) < kUnitTol) return out;  // neither case applies

  const bool sub_unitary = point.T < 1.0;
  out.unimodular_sign = sub_unitary ? UnimodularSign::Plus : UnimodularSign::Minus;
  const double root = std::sqrt(point.R_left * point.R_right);
  out.unimodularity_residual = std::abs(point.T + (sub_unitary ? root : -root) - 1.0);

  if (std::abs(point.r_left) < kZeroAmp || std::abs(point.r_right) < kZeroAmp) return out;

  // Pick the quarter-period sign from the left side, then hold the right
  // side to the same sign (same offset for T < 1, mirrored for T > 1).
  const double dl = wrap_angle(point.theta - point.phi_left);
  const double s = (std::abs(wrap_angle(dl - kHalfPi)) <= std::abs(wrap_angle(dl + kHalfPi))) ? 1.0 : -1.0;
  out.phase_residual_left = std::abs(wrap_angle(dl - s * kHalfPi));
  const double dr = sub_unitary ? wrap_angle(point.theta - point.phi_right)
                                : wrap_angle(point.phi_right - point.theta);
  out.phase_residual_right = std::abs(wrap_angle(dr - s * kHalfPi));
  return out;
}

}  // namespace cpa
