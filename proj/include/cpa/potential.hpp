#pragma once

#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace cpa {

using Complex = std::complex<double>;

/// Named sub-parametrizations of the Scarf II family.
enum class ScarfForm { Generic, AbsorptiveD, BrokenPtC, UnbrokenAb };

/// V(x) = P sech^2(x) + Q sech(x) tanh(x), P and Q complex.
struct ScarfII {
  Complex P;
  Complex Q;
  ScarfForm form = ScarfForm::Generic;
  // Parameters of the named forms; meaningful only for the matching `form`.
  double d = 0.0;
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;

  /// V(x) = (d^2 - i d) sech^2(x): absorptive, P-symmetric for d > 0.
  static ScarfII absorptive(double d);
  /// V(x) = (2c^2 - 1/4) sech^2(x) - i (2c^2 + 1/2) sech(x) tanh(x):
  /// PT-symmetric with a self-dual spectral singularity at k = +-c.
  static ScarfII broken_pt(double c);
  /// V(x) = -(a^2 + b^2 + a) sech^2(x) - i b (2a + 1) sech(x) tanh(x):
  /// PT-symmetric with real discrete spectrum.
  static ScarfII unbroken(double a, double b);
};

/// Piecewise-constant profile of compact support:
/// V(x) = P Theta1(x) - i Q Theta2(x), Theta1 = 1 on |x| <= L,
/// Theta2 = -1 on (-L, 0), +1 on [0, L), 0 outside.
struct Rectangular {
  Complex P;
  double Q = 0.0;
  double L = 1.0;  // half-width, must be > 0
};

/// V(x) = P exp(-x^2) + i Q x exp(-x^2).
struct Gaussian {
  Complex P;
  double Q = 0.0;
};

/// Linearly interpolated samples, zero outside the sampled range.
/// x must be strictly increasing.
struct Tabulated {
  std::vector<double> x;
  std::vector<Complex> v;
};

using PotentialSpec = std::variant<ScarfII, Rectangular, Gaussian, Tabulated>;

/// Throws std::invalid_argument if the spec violates its invariants
/// (L <= 0, non-increasing tabulated abscissae, size mismatch).
void validate(const PotentialSpec& spec);

Complex evaluate(const PotentialSpec& spec, double x);

/// One-sided limit of V at x. Differs from evaluate() only at jump points
/// of the rectangular family; the integrator uses it so that every step
/// sees the potential of its own subinterval.
enum class Side { Below, Above };
Complex evaluate_limit(const PotentialSpec& spec, double x, Side side);

/// Truncation radius beyond which |V| is negligible relative to its peak.
/// Scarf II: 12 when the odd term is absent, 26 otherwise (that term only
/// decays like exp(-|x|)); Gaussian: 6; rectangular: L; tabulated: max |x|.
double x_tail(const PotentialSpec& spec);

enum class SymmetryKind { Hermitian, PSymmetricNonHermitian, PTSymmetric, NonPT };
enum class PtPhase { Unbroken, Broken };

struct SymmetryClass {
  SymmetryKind kind = SymmetryKind::NonPT;
  std::optional<PtPhase> pt_phase;  // only set where a criterion exists (Scarf II)
};

/// Classifies V on a symmetric grid: Hermitian first, then PT-symmetric
/// (conj(V(-x)) == V(x)), then P-symmetric (V(-x) == V(x)), else NonPT.
/// For PT-symmetric Scarf II written as -V1 sech^2 + i V2 sech tanh the
/// phase is Unbroken iff V1 > 0 and |V2| <= V1 + 1/4.
SymmetryClass classify_symmetry(const PotentialSpec& spec, std::span<const double> grid, double tol);
SymmetryClass classify_symmetry(const PotentialSpec& spec);

struct BoundState {
  double energy;  // always <= 0
  int branch;     // 1: E = -(n-a)^2, 2: E = -(m-1/2-b)^2
  int index;      // n or m
};

/// Discrete spectrum of the unbroken-PT Scarf II parametrization:
/// { -(n-a)^2 : 0 <= n < a } and { -(m-1/2-b)^2 : 0 <= m < b+1/2 },
/// sorted ascending, duplicates retained with branch labels.
/// Throws std::invalid_argument for any other Scarf form.
std::vector<BoundState> bound_state_energies(const ScarfII& spec);

}  // namespace cpa
