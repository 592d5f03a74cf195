#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "cpa/errors.hpp"
#include "cpa/potential.hpp"
#include "cpa/scarf_analytic.hpp"
#include "cpa/solver.hpp"

using namespace cpa;
using doctest::Approx;

TEST_CASE("RK4 reproduces the domain-A closed form in both channels") {
  const SchrodingerSolver solver(ScarfII::absorptive(2.0));
  for (double k : {1.0, -1.0, 1.7, -0.6}) {
    const AnalyticPoint ref = domain_a_point(k, 2.0);
    const ScatteringPoint num = solver.scattering_at(k);
    CHECK(num.T == Approx(ref.T).epsilon(1e-6));
    CHECK(num.R_left == Approx(ref.R_left).epsilon(1e-6));
    CHECK(num.R_right == Approx(ref.R_right).epsilon(1e-6));
    CHECK(num.abs_det_s == Approx(ref.abs_det_s).epsilon(1e-6));
  }
}

TEST_CASE("RK4 reproduces the domain-B and domain-C closed forms") {
  const SchrodingerSolver b(ScarfII::broken_pt(0.75));
  const AnalyticPoint rb = domain_b_point(1.3, 0.75);
  const ScatteringPoint nb = b.scattering_at(1.3);
  CHECK(nb.T == Approx(rb.T).epsilon(1e-6));
  CHECK(nb.R_left == Approx(rb.R_left).epsilon(1e-6));
  CHECK(nb.abs_det_s == Approx(1.0).epsilon(1e-6));

  const SchrodingerSolver c(ScarfII::unbroken(1.2, 0.8));
  const AnalyticPoint rc = domain_c_point(0.9, 1.2, 0.8);
  const ScatteringPoint nc = c.scattering_at(0.9);
  CHECK(nc.T == Approx(rc.T).epsilon(1e-6));
  CHECK(nc.abs_det_s == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("RK4 matches the rectangular transfer matrix to 1e-10 on amplitudes") {
  const Rectangular rect{Complex(2.21, -1.091), 0.0, 2.0};
  const SchrodingerSolver solver(rect);
  for (double k : {0.8, 1.4, 2.0, -1.1, -2.5}) {
    const RectangularAmplitudes exact = transfer_matrix_rectangular(rect.P, rect.Q, rect.L, k);
    const Amplitudes left = solver.solve_left(k);
    const Amplitudes right = solver.solve_right(k);
    CHECK(std::abs(left.t - exact.t) < 1e-10);
    CHECK(std::abs(right.t - exact.t) < 1e-10);
    CHECK(std::abs(left.r - exact.r_left) < 1e-10);
    CHECK(std::abs(right.r - exact.r_right) < 1e-10);
  }
}

TEST_CASE("RK4 matches the PT rectangular transfer matrix including the odd part") {
  const Rectangular rect{Complex(2.7, 0.0), -0.9, 2.0};
  const SchrodingerSolver solver(rect);
  // Wavenumbers off the E = 3.45 resonance, where the amplitudes are O(1);
  // on resonance the 1e-10 absolute comparison would measure amplification,
  // not integrator error.
  for (double k : {0.9, 1.6, -2.1}) {
    const RectangularAmplitudes exact = transfer_matrix_rectangular(rect.P, rect.Q, rect.L, k);
    const Amplitudes left = solver.solve_left(k);
    const Amplitudes right = solver.solve_right(k);
    CHECK(std::abs(left.t - exact.t) < 1e-10);
    CHECK(std::abs(left.r - exact.r_left) < 1e-10);
    CHECK(std::abs(right.r - exact.r_right) < 1e-10);
  }
}

TEST_CASE("transfer matrix flags the evanescent branch below the barrier top") {
  // Hermitian barrier: k^2 < Re P puts kappa on the cut.
  const RectangularAmplitudes under = transfer_matrix_rectangular(Complex(4.0, 0.0), 0.0, 1.0, 1.0);
  CHECK(under.branch_on_cut);
  const RectangularAmplitudes over = transfer_matrix_rectangular(Complex(4.0, 0.0), 0.0, 1.0, 3.0);
  CHECK_FALSE(over.branch_on_cut);
  // Hermitian sanity: T + R = 1.
  CHECK(std::norm(under.t) + std::norm(under.r_left) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("observed RK4 convergence order against the exact slab solution is >= 3.5") {
  const Rectangular rect{Complex(2.21, -1.091), 0.0, 2.0};
  const double k = 1.1;
  const RectangularAmplitudes exact = transfer_matrix_rectangular(rect.P, rect.Q, rect.L, k);
  auto error_at = [&](double h) {
    SolverConfig cfg;
    cfg.step = h;
    const SchrodingerSolver solver(rect, cfg);
    const Amplitudes left = solver.solve_left(k);
    return std::max(std::abs(left.t - exact.t), std::abs(left.r - exact.r_left));
  };
  const double e1 = error_at(0.01);
  const double e2 = error_at(0.005);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
}

TEST_CASE("k = 0 is rejected everywhere") {
  const SchrodingerSolver solver(ScarfII::absorptive(2.0));
  CHECK_THROWS_AS(solver.solve_left(0.0), DegenerateKError);
  CHECK_THROWS_AS(solver.solve_right(0.0), DegenerateKError);
  CHECK_THROWS_AS(solver.scattering_at(0.0), DegenerateKError);
  CHECK_THROWS_AS(transfer_matrix_rectangular(Complex(1.0, 0.0), 0.0, 1.0, 0.0), DegenerateKError);
}

TEST_CASE("solver configuration is validated") {
  SolverConfig bad_step;
  bad_step.step = 0.0;
  CHECK_THROWS_AS(SchrodingerSolver(ScarfII::absorptive(2.0), bad_step), std::invalid_argument);

  SolverConfig short_box;
  short_box.x_max = 3.0;  // smaller than the family tail radius (12)
  CHECK_THROWS_AS(SchrodingerSolver(ScarfII::absorptive(2.0), short_box), std::invalid_argument);

  const SchrodingerSolver defaulted(ScarfII::absorptive(2.0));
  CHECK(defaulted.x_max() == Approx(12.0));
  const SchrodingerSolver rect(Rectangular{Complex(1.0, 0.0), 0.0, 2.0});
  CHECK(rect.x_max() == Approx(2.0));
}

TEST_CASE("a runaway potential surfaces as NonFiniteStateError") {
  // V = -1e9 over [-1, 1] makes the decaying/growing pair overflow double
  // range within the box.
  Tabulated deep;
  deep.x = {-1.0, 1.0};
  deep.v = {Complex(-1e9, 0.0), Complex(-1e9, 0.0)};
  const SchrodingerSolver solver{PotentialSpec(deep)};
  CHECK_THROWS_AS(solver.solve_left(1.0), NonFiniteStateError);
}

TEST_CASE("observables are capped at the pole and flagged") {
  // Self-dual pole at k = 1 for the broken-PT form; a wavenumber this close
  // drives T far beyond the cap.
  const SchrodingerSolver solver(ScarfII::broken_pt(1.0));
  const ScatteringPoint p = solver.scattering_at(1.0 + 1e-12);
  CHECK(p.capped);
  CHECK(p.T == kPoleCap);
  CHECK(p.R_left == kPoleCap);
}

TEST_CASE("scattering_at caches the potential table across k values") {
  const SchrodingerSolver solver(ScarfII::absorptive(2.0));
  const ScatteringPoint first = solver.scattering_at(1.0);
  const ScatteringPoint again = solver.scattering_at(1.0);
  CHECK(first.t == again.t);  // bitwise: same table, same arithmetic
  CHECK(first.r_left == again.r_left);
}
