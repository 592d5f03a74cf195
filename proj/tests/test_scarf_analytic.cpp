#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cpa/potential.hpp"
#include "cpa/scarf_analytic.hpp"

using namespace cpa;
using doctest::Approx;

// Frozen high-precision reference values (30-digit arithmetic).
namespace oracle {
constexpr double kTA_k1_d2 = 6.2131846716354187e-4;
constexpr double kFA_k1_d2 = -23.183906551043041;
constexpr double kRA_k1_d2 = 0.33395465180049688;
constexpr double kTA_limit_d2 = 0.039788458260054494;  // tanh(2 pi) / (8 pi)
constexpr double kTB_k13_c075 = 1.0662520998051676;
constexpr double kFB_imag_k13_c075 = -1.8745979569054093;
constexpr double kRB_k13_c075 = 3.7469351633732689;
constexpr double kTC_k09 = 0.99995566883358639;  // a = 1.2, b = 0.8
constexpr double kFC_imag_k09 = 0.11253896694781295;
}  // namespace oracle

TEST_CASE("domain A point matches the frozen oracle at k=1, d=2") {
  const AnalyticPoint p = domain_a_point(1.0, 2.0);
  CHECK(p.T == Approx(oracle::kTA_k1_d2).epsilon(1e-13));
  CHECK(p.f_left.real() == Approx(oracle::kFA_k1_d2).epsilon(1e-13));
  CHECK(std::abs(p.f_left.imag()) < 1e-13);
  // P-symmetric: both sides reflect identically.
  CHECK(std::abs(p.f_left - p.f_right) < 1e-13);
  CHECK(p.R_left == Approx(oracle::kRA_k1_d2).epsilon(1e-13));
  CHECK(p.R_right == Approx(oracle::kRA_k1_d2).epsilon(1e-13));
  CHECK(p.abs_det_s == Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK_FALSE(p.at_pole);
  CHECK_FALSE(p.at_indeterminacy);
}

TEST_CASE("domain A: 0/0 point at k=d carries the L'Hopital limit") {
  const AnalyticPoint p = domain_a_point(2.0, 2.0);
  CHECK(p.at_indeterminacy);
  CHECK(p.T == Approx(oracle::kTA_limit_d2).epsilon(1e-13));
  CHECK(p.abs_det_s == Approx(0.0));
}

TEST_CASE("domain A: transmission pole at k=-d") {
  const AnalyticPoint p = domain_a_point(-2.0, 2.0);
  CHECK(p.at_pole);
}

TEST_CASE("domain A stays finite at large k where cosh^2 overflows") {
  const AnalyticPoint p = domain_a_point(300.0, 1.0);
  CHECK(std::isfinite(p.T));
  CHECK(p.T == Approx(299.0 / 301.0).epsilon(1e-10));
  CHECK(p.abs_det_s == Approx(299.0 / 301.0).epsilon(1e-12));
}

TEST_CASE("domain A raw determinant exhibits the uncancelled 0/0") {
  CHECK(domain_a_abs_det_s_raw(1.0, 2.0) == Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(std::isnan(domain_a_abs_det_s_raw(2.0, 2.0)));
}

TEST_CASE("domain B point matches the frozen oracle at k=1.3, c=0.75") {
  const AnalyticPoint p = domain_b_point(1.3, 0.75);
  CHECK(p.T == Approx(oracle::kTB_k13_c075).epsilon(1e-13));
  CHECK(std::abs(p.f_left.real()) < 1e-13);
  CHECK(p.f_left.imag() == Approx(oracle::kFB_imag_k13_c075).epsilon(1e-13));
  CHECK(p.R_left == Approx(oracle::kRB_k13_c075).epsilon(1e-13));
  CHECK(p.abs_det_s == Approx(1.0));
}

TEST_CASE("domain B: |det S| = 1 identically away from the self-dual poles") {
  for (double k : {0.2, 0.5, 1.1, 2.7, 5.0, -0.4, -1.9}) {
    const AnalyticPoint p = domain_b_point(k, 2.0);
    CHECK(p.abs_det_s == Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(p.at_pole);
  }
}

TEST_CASE("domain B: self-dual singularity flagged at both k = +c and k = -c") {
  for (double k : {2.0, -2.0}) {
    const AnalyticPoint p = domain_b_point(k, 2.0);
    CHECK(p.at_pole);
    CHECK(p.at_indeterminacy);
    CHECK(p.abs_det_s == Approx(1.0));  // limit value
  }
}

TEST_CASE("domain B stays finite at large k") {
  const AnalyticPoint p = domain_b_point(200.0, 2.0);
  CHECK(std::isfinite(p.T));
  CHECK(p.T == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("domain C point matches the frozen oracle at k=0.9") {
  const AnalyticPoint p = domain_c_point(0.9, 1.2, 0.8);
  CHECK(p.T == Approx(oracle::kTC_k09).epsilon(1e-13));
  CHECK(std::abs(p.f_left.real()) < 1e-13);
  CHECK(p.f_left.imag() == Approx(oracle::kFC_imag_k09).epsilon(1e-13));
  CHECK(p.abs_det_s == Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(p.at_pole);
}

TEST_CASE("domain C: unimodular determinant and no pole over a wide k sweep") {
  for (double k = 0.1; k <= 30.0; k *= 1.7) {
    for (double s : {1.0, -1.0}) {
      const AnalyticPoint p = domain_c_point(s * k, 1.2, 0.8);
      CHECK_FALSE(p.at_pole);
      CHECK(p.abs_det_s == Approx(1.0).epsilon(1e-10));
      CHECK(std::isfinite(p.T));
    }
  }
}

TEST_CASE("curves pair +k and -k per energy and reject non-positive energies") {
  const std::vector<double> energies = {0.5, 1.0, 4.0};
  const auto curve = domain_a_curve(energies, 2.0);
  REQUIRE(curve.size() == 3);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].E == Approx(energies[i]));
    const AnalyticPoint ref = domain_a_point(std::sqrt(energies[i]), 2.0);
    CHECK(curve[i].pos.T == Approx(ref.T).epsilon(1e-14));
    CHECK(curve[i].neg.k == Approx(-std::sqrt(energies[i])));
  }

  const std::vector<double> bad = {1.0, -2.0};
  CHECK_THROWS_AS(domain_a_curve(bad, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(domain_b_curve(bad, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(domain_c_curve(bad, 1.2, 0.8), std::invalid_argument);
}

TEST_CASE("domain C transmission poles sit exactly at the bound-state wavenumbers") {
  // The transmission denominator (sinh^2 pi k + sin^2 pi a)(sinh^2 pi k + cos^2 pi b),
  // continued to imaginary k, vanishes at k = i(n - a) and k = i(m - 1/2 - b).
  const double a = 1.2, b = 0.8;
  const auto denom = [&](const Complex& k) {
    const Complex sh = std::sinh(M_PI * k);
    const double sa = std::sin(M_PI * a);
    const double cb = std::cos(M_PI * b);
    return (sh * sh + sa * sa) * (sh * sh + cb * cb);
  };
  for (const BoundState& s : bound_state_energies(ScarfII::unbroken(a, b))) {
    const double kappa = std::sqrt(-s.energy);
    CHECK(std::abs(denom(Complex(0.0, kappa))) < 1e-10);
  }
}
