#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cpa {

using Complex = std::complex<double>;

/// Closed-form observables at one signed wavenumber.
/// R_side = T |f_side|^2; abs_det_s is finite whenever neither flag is set.
struct AnalyticPoint {
  double k = 0.0;
  double T = 0.0;
  Complex f_left;
  Complex f_right;
  double R_left = 0.0;
  double R_right = 0.0;
  double abs_det_s = 0.0;
  bool at_pole = false;           // transmission pole (spectral singularity)
  bool at_indeterminacy = false;  // |det S| is 0/0; abs_det_s holds the limit
};

/// Absorptive P-symmetric domain, V = (d^2 - i d) sech^2 x.
/// T = ((k-d)/(k+d)) sinh^2(pi k) / (cosh^2(pi k) - cosh^2(pi d)),
/// f = -sinh(pi d)/sinh(pi k), |det S| = |(k-d)/(k+d)|.
/// k = d is the 0/0 point (T takes the limit tanh(pi d)/(4 pi d),
/// |det S| -> 0); k = -d is the transmission pole.
AnalyticPoint domain_a_point(double k, double d);

/// Broken-PT domain, V = (2c^2 - 1/4) sech^2 x - i (2c^2 + 1/2) sech x tanh x.
/// |det S| = 1 away from the self-dual poles at k = +-c, where it is
/// indeterminate with limit 1.
AnalyticPoint domain_b_point(double k, double c);

/// Unbroken-PT domain, V = -(a^2+b^2+a) sech^2 x - i b(2a+1) sech x tanh x.
/// No pole at any real k; |det S| is evaluated through the
/// T (1 - f_{a,b} f_{a,-b}) route and equals 1 identically.
AnalyticPoint domain_c_point(double k, double a, double b);

/// Uncancelled form of the domain-A determinant modulus, kept as a debug
/// path to exhibit the 0/0 exactly as written.
double domain_a_abs_det_s_raw(double k, double d);

struct AnalyticCurvePoint {
  double E;
  AnalyticPoint pos;  // k = +sqrt(E)
  AnalyticPoint neg;  // k = -sqrt(E)
};

std::vector<AnalyticCurvePoint> domain_a_curve(std::span<const double> energies, double d);
std::vector<AnalyticCurvePoint> domain_b_curve(std::span<const double> energies, double c);
std::vector<AnalyticCurvePoint> domain_c_curve(std::span<const double> energies, double a, double b);

}  // namespace cpa
