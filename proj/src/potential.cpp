#include "cpa/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpa {

namespace {

double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

constexpr double kPureTol = 1e-12;

bool nearly_zero(double v) { return std::abs(v) < kPureTol; }

}  // namespace

ScarfII ScarfII::absorptive(double d) {
  ScarfII s;
  s.P = Complex(d * d, -d);
  s.Q = 0.0;
  s.form = ScarfForm::AbsorptiveD;
  s.d = d;
  return s;
}

ScarfII ScarfII::broken_pt(double c) {
  ScarfII s;
  s.P = Complex(2.0 * c * c - 0.25, 0.0);
  s.Q = Complex(0.0, -(2.0 * c * c + 0.5));
  s.form = ScarfForm::BrokenPtC;
  s.c = c;
  return s;
}

ScarfII ScarfII::unbroken(double a, double b) {
  ScarfII s;
  s.P = Complex(-(a * a + b * b + a), 0.0);
  s.Q = Complex(0.0, -b * (2.0 * a + 1.0));
  s.form = ScarfForm::UnbrokenAb;
  s.a = a;
  s.b = b;
  return s;
}

void validate(const PotentialSpec& spec) {
  if (const auto* r = std::get_if<Rectangular>(&spec)) {
    if (!(r->L > 0.0)) throw std::invalid_argument("rectangular potential requires L > 0");
  } else if (const auto* t = std::get_if<Tabulated>(&spec)) {
    if (t->x.size() != t->v.size())
      throw std::invalid_argument("tabulated potential: x and V sample counts differ");
    for (std::size_t i = 1; i < t->x.size(); ++i)
      if (!(t->x[i] > t->x[i - 1]))
        throw std::invalid_argument("tabulated potential: x values must be strictly increasing");
  }
}

Complex evaluate(const PotentialSpec& spec, double x) {
  struct Visitor {
    double x;
    Complex operator()(const ScarfII& s) const {
      const double sh = sech(x);
      const double th = std::tanh(x);
      return s.P * (sh * sh) + s.Q * (sh * th);
    }
    Complex operator()(const Rectangular& r) const {
      if (std::abs(x) > r.L) return 0.0;
      double theta2 = 0.0;
      if (x > -r.L && x < 0.0) theta2 = -1.0;
      else if (x >= 0.0 && x < r.L) theta2 = 1.0;
      return r.P - Complex(0.0, r.Q) * theta2;
    }
    Complex operator()(const Gaussian& g) const {
      const double e = std::exp(-x * x);
      return g.P * e + Complex(0.0, g.Q * x * e);
    }
    Complex operator()(const Tabulated& t) const {
      if (t.x.empty() || x < t.x.front() || x > t.x.back()) return 0.0;
      const auto it = std::lower_bound(t.x.begin(), t.x.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - t.x.begin());
      if (i == 0 || t.x[i] == x) return t.v[i == t.x.size() ? i - 1 : i];
      const double w = (x - t.x[i - 1]) / (t.x[i] - t.x[i - 1]);
      return t.v[i - 1] * (1.0 - w) + t.v[i] * w;
    }
  };
  return std::visit(Visitor{x}, spec);
}

Complex evaluate_limit(const PotentialSpec& spec, double x, Side side) {
  if (const auto* r = std::get_if<Rectangular>(&spec)) {
    // Jumps sit at -L, 0, L; at (or within rounding of) a jump, pick the
    // open-interval value of the side asked for.
    const double eps = (side == Side::Above) ? 1.0 : -1.0;
    const double L = r->L;
    const double snap = 1e-9 * std::max(1.0, L);
    for (double jump : {-L, 0.0, L}) {
      if (std::abs(x - jump) <= snap) {
        const double probe = jump + eps * std::min(L, 1.0) * 0.5;
        return evaluate(spec, probe);
      }
    }
  }
  return evaluate(spec, x);
}

double x_tail(const PotentialSpec& spec) {
  struct Visitor {
    double operator()(const ScarfII& s) const {
      return std::abs(s.Q) < kPureTol ? 12.0 : 26.0;
    }
    double operator()(const Rectangular& r) const { return r.L; }
    double operator()(const Gaussian&) const { return 6.0; }
    double operator()(const Tabulated& t) const {
      if (t.x.empty()) return 0.0;
      return std::max(std::abs(t.x.front()), std::abs(t.x.back()));
    }
  };
  return std::visit(Visitor{}, spec);
}

SymmetryClass classify_symmetry(const PotentialSpec& spec, std::span<const double> grid, double tol) {
  bool hermitian = true;
  bool pt = true;
  bool parity = true;
  // Averaging the one-sided limits makes the test blind to the value a
  // piecewise potential takes exactly at a jump, which is measure-zero
  // and must not decide the symmetry class.
  const auto sample = [&](double x) {
    return 0.5 * (evaluate_limit(spec, x, Side::Below) + evaluate_limit(spec, x, Side::Above));
  };
  for (double x : grid) {
    const Complex v = sample(x);
    const Complex vm = sample(-x);
    if (std::abs(v.imag()) > tol) hermitian = false;
    if (std::abs(std::conj(vm) - v) > tol) pt = false;
    if (std::abs(vm - v) > tol) parity = false;
  }

  SymmetryClass out;
  if (hermitian) {
    out.kind = SymmetryKind::Hermitian;
    return out;
  }
  if (pt) {
    out.kind = SymmetryKind::PTSymmetric;
    if (const auto* s = std::get_if<ScarfII>(&spec)) {
      // PT-symmetric Scarf II has real P and imaginary Q:
      // V = -V1 sech^2 + i V2 sech tanh with V1 = -Re P, V2 = Im Q.
      if (nearly_zero(s->P.imag()) && nearly_zero(s->Q.real())) {
        const double v1 = -s->P.real();
        const double v2 = s->Q.imag();
        out.pt_phase = (v1 > 0.0 && std::abs(v2) <= v1 + 0.25) ? PtPhase::Unbroken : PtPhase::Broken;
      }
    }
    return out;
  }
  out.kind = parity ? SymmetryKind::PSymmetricNonHermitian : SymmetryKind::NonPT;
  return out;
}

SymmetryClass classify_symmetry(const PotentialSpec& spec) {
  const double tail = std::max(x_tail(spec), 1.0);
  std::vector<double> grid;
  const int n = 201;
  grid.reserve(n);
  for (int i = 0; i < n; ++i) grid.push_back(-tail + 2.0 * tail * i / (n - 1));
  return classify_symmetry(spec, grid, 1e-10);
}

std::vector<BoundState> bound_state_energies(const ScarfII& spec) {
  if (spec.form != ScarfForm::UnbrokenAb)
    throw std::invalid_argument("bound_state_energies: only the unbroken (a,b) Scarf II form has a closed-form spectrum");
  std::vector<BoundState> out;
  for (int n = 0; n < spec.a; ++n)
    out.push_back({-(n - spec.a) * (n - spec.a), 1, n});
  for (int m = 0; m < spec.b + 0.5; ++m)
    out.push_back({-(m - 0.5 - spec.b) * (m - 0.5 - spec.b), 2, m});
  std::stable_sort(out.begin(), out.end(),
                   [](const BoundState& l, const BoundState& r) { return l.energy < r.energy; });
  return out;
}

}  // namespace cpa
