#include "cpa/scarf_analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpa/errors.hpp"

namespace cpa {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPoleProximity = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

// exp-based forms that never overflow in |k|.
double csch(double x) {
  const double e = std::exp(-std::abs(x));
  const double v = 2.0 * e / (1.0 - e * e);
  return x < 0.0 ? -v : v;
}

double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

double csch2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  const double d = 1.0 - e;
  return 4.0 * e / (d * d);
}

// e^{alpha x} csch(2x) for alpha = +-1; the exponent alpha*x - 2|x| is
// always <= -|x|, so this stays finite for any x.
double exp_csch2(double alpha, double x) {
  const double ax = std::abs(x);
  const double v = 2.0 * std::exp(alpha * x - 2.0 * ax) / (1.0 - std::exp(-4.0 * ax));
  return x < 0.0 ? -v : v;
}

void require_nonzero_k(double k) {
  if (k == 0.0) throw DegenerateKError();
}

}  // namespace

AnalyticPoint domain_a_point(double k, double d) {
  require_nonzero_k(k);
  AnalyticPoint p;
  p.k = k;
  const double shd = std::sinh(kPi * d);
  const Complex f(-shd * csch(kPi * k), 0.0);
  p.f_left = p.f_right = f;

  if (std::abs(d) > kPoleProximity && std::abs(k + d) < kPoleProximity) {
    p.at_pole = true;  // spectral singularity in this channel
    p.T = p.R_left = p.R_right = p.abs_det_s = kInf;
    return p;
  }
  if (std::abs(d) > kPoleProximity && std::abs(k - d) < kPoleProximity) {
    // 0/0 point: T takes the L'Hopital limit, |det S| its limit 0.
    p.at_indeterminacy = true;
    p.T = std::tanh(kPi * d) / (4.0 * kPi * d);
    const double af = std::abs(f);
    p.R_left = p.R_right = p.T * af * af;
    p.abs_det_s = 0.0;
    return p;
  }

  const double q = (k - d) / (k + d);
  // cosh^2(pi k) - cosh^2(pi d) == sinh^2(pi k) - sinh^2(pi d)
  p.T = q / (1.0 - shd * shd * csch2(kPi * k));
  const double af = std::abs(f);
  p.R_left = p.R_right = p.T * af * af;
  p.abs_det_s = std::abs(q);
  return p;
}

double domain_a_abs_det_s_raw(double k, double d) {
  const double ck = std::cosh(kPi * k);
  const double cd = std::cosh(kPi * d);
  const double num = ck * ck - cd * cd;
  return std::abs((k - d) / (k + d) * num / num);
}

AnalyticPoint domain_b_point(double k, double c) {
  require_nonzero_k(k);
  AnalyticPoint p;
  p.k = k;
  const double cosh2pc = std::cosh(2.0 * kPi * c);
  const double e_minus = exp_csch2(-1.0, kPi * k);  // e^{-pi k} csch(2 pi k)
  const double e_plus = exp_csch2(+1.0, kPi * k);   // e^{+pi k} csch(2 pi k)
  p.f_left = Complex(0.0, e_minus - e_plus * cosh2pc);
  p.f_right = Complex(0.0, e_plus - e_minus * cosh2pc);

  if (std::abs(c) > kPoleProximity &&
      (std::abs(k - c) < kPoleProximity || std::abs(k + c) < kPoleProximity)) {
    // Self-dual spectral singularity; |det S| is 0/0 with limit 1.
    p.at_pole = true;
    p.at_indeterminacy = true;
    p.T = p.R_left = p.R_right = kInf;
    p.abs_det_s = 1.0;
    return p;
  }

  const double shc = std::sinh(kPi * c);
  const double den = 1.0 - shc * shc * csch2(kPi * k);
  p.T = (1.0 + csch2(kPi * k)) / (den * den);
  p.R_left = p.T * std::norm(p.f_left);
  p.R_right = p.T * std::norm(p.f_right);
  p.abs_det_s = 1.0;  // identical numerator and denominator away from k = +-c
  return p;
}

AnalyticPoint domain_c_point(double k, double a, double b) {
  require_nonzero_k(k);
  AnalyticPoint p;
  p.k = k;
  const double sa = std::sin(kPi * a);
  const double ca = std::cos(kPi * a);
  const double sb = std::sin(kPi * b);
  const double cb = std::cos(kPi * b);
  const double se = sech(kPi * k);
  const double cs = csch(kPi * k);

  p.f_left = Complex(0.0, -ca * sb * se + sa * cb * cs);
  const Complex f_mirror(0.0, ca * sb * se + sa * cb * cs);  // b -> -b
  p.f_right = f_mirror;

  const double c2 = csch2(kPi * k);
  p.T = (1.0 + c2) / ((1.0 + sa * sa * c2) * (1.0 + cb * cb * c2));
  p.R_left = p.T * std::norm(p.f_left);
  p.R_right = p.T * std::norm(p.f_right);
  p.abs_det_s = std::abs(p.T * (Complex(1.0, 0.0) - p.f_left * f_mirror));
  return p;
}

namespace {

template <typename PointFn>
std::vector<AnalyticCurvePoint> make_curve(std::span<const double> energies, PointFn&& point) {
  std::vector<AnalyticCurvePoint> out;
  out.reserve(energies.size());
  for (double e : energies) {
    if (!(e > 0.0)) throw std::invalid_argument("analytic curves require positive energies");
    const double k = std::sqrt(e);
    out.push_back({e, point(k), point(-k)});
  }
  return out;
}

}  // namespace

std::vector<AnalyticCurvePoint> domain_a_curve(std::span<const double> energies, double d) {
  return make_curve(energies, [d](double k) { return domain_a_point(k, d); });
}

std::vector<AnalyticCurvePoint> domain_b_curve(std::span<const double> energies, double c) {
  return make_curve(energies, [c](double k) { return domain_b_point(k, c); });
}

std::vector<AnalyticCurvePoint> domain_c_curve(std::span<const double> energies, double a, double b) {
  return make_curve(energies, [a, b](double k) { return domain_c_point(k, a, b); });
}

}  // namespace cpa
