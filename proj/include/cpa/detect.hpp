#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cpa/potential.hpp"
#include "cpa/smatrix.hpp"
#include "cpa/solver.hpp"

namespace cpa {

/// Detection thresholds. The defaults separate the catalog's genuine
/// poles from its ordinary resonances; every value can be overridden.
struct DetectConfig {
  SolverConfig solver;
  int points_per_decade = 400;  // coarse scan density
  double e_floor = 1e-4;        // energies below this are never scanned
  double t_huge = 1e8;          // strict pole: T beyond this is treated as divergent
  double t_ss_accept = 1e3;     // minimum refined T for a spectral-singularity finding
  double g_trigger = 1e-2;      // bracket trigger on 1/T (T > 100)
  double cpa_trigger = 0.5;     // bracket trigger on |det S|
  double tol_cpa = 1e-3;        // CPA acceptance on refined |det S|
  double bracket_k_tol = 1e-6;  // golden-section bracket width in k
  double e_match = 1e-3;        // energy pairing tolerance between +-k channels
  double eps_e = 1e-2;          // neighborhood offset for the 0/0-with-limit-1 test
  double tol_one = 1e-3;        // |det S| proximity to 1 in that neighborhood
  double t_finite = 1e3;        // "finite channel" bound in the CPA template
  int threads = 0;              // 0: hardware concurrency, capped by CPA_SCATTER_THREADS
};

struct ScanPoint {
  double E = 0.0;
  ScatteringPoint pos;  // k = +sqrt(E)
  ScatteringPoint neg;  // k = -sqrt(E)
  bool failed = false;
  std::string error;
};

/// Uniform energy grid; solver failures flag the point without aborting.
std::vector<ScanPoint> scan(const PotentialSpec& spec, double e_min, double e_max, int n_points,
                            const DetectConfig& cfg = {});

struct SsFinding {
  double E = 0.0;
  double k = 0.0;  // signed: the channel the pole lives in
  double T = 0.0;
  int iterations = 0;
  double bracket_width = 0.0;
  bool strict = false;  // refined T exceeded t_huge (a true divergence)
};

/// Coarse scan of 1/T in both channels; local minima below g_trigger are
/// bracketed and refined by golden section to bracket_k_tol in k,
/// accepted when the refined T exceeds t_ss_accept.
std::vector<SsFinding> find_spectral_singularities(const PotentialSpec& spec, double e_min,
                                                   double e_max, const DetectConfig& cfg = {});

struct CpaFinding {
  double E = 0.0;
  double abs_det_s = 0.0;
  double T_pos = 0.0;
  double T_neg = 0.0;
  int iterations = 0;
  double bracket_width = 0.0;
  bool reversed_ss_found = false;  // T(-k_c) peaks beyond t_ss_accept
  bool reversed_ss_strict = false;
};

/// Coarse scan of |det S| on the +k branch; minima refined by golden
/// section and accepted below tol_cpa. Each acceptance is cross-checked
/// for a spectral singularity in the time-reversed channel.
std::vector<CpaFinding> find_cpa(const PotentialSpec& spec, double e_min, double e_max,
                                 const DetectConfig& cfg = {});

enum class EventKind { SpectralSingularity, CpaOnly, CpaWithLasing };

struct EventDiagnostics {
  double T_pos = 0.0;
  double T_neg = 0.0;
  double abs_det_s = 0.0;
  int refinement_iterations = 0;
  double bracket_width = 0.0;
  bool strict_pole = false;
};

struct PhenomenonEvent {
  EventKind kind;
  double E = 0.0;
  double k = 0.0;
  EventDiagnostics diagnostics;
};

struct Conflict {
  double E = 0.0;
  std::string reason;
};

struct Classification {
  std::vector<PhenomenonEvent> events;  // sorted by E
  std::vector<Conflict> conflicts;      // findings matching no template
};

/// Merges the two finders' output by energy proximity:
/// strict poles in both channels with |det S| ~ 1 just off the energy ->
/// CPA with lasing; a CPA with a time-reversed singularity -> CPA only;
/// remaining singularities stand alone.
Classification classify_events(const std::vector<SsFinding>& ss, const std::vector<CpaFinding>& cpa,
                               const PotentialSpec& spec, const DetectConfig& cfg = {});

struct ConjectureCheck {
  // True/false when the Scarf II real-spectrum criterion decides the
  // phase; unset for PT-symmetric potentials without a criterion.
  std::optional<bool> has_real_spectrum_criterion;
  bool ss_found = false;
  bool cpa_found = false;
};

/// Empirical test of "unbroken PT symmetry admits neither spectral
/// singularity nor CPA" on one instance; never a proof.
ConjectureCheck check_unbroken_conjecture(const PotentialSpec& spec, double e_min, double e_max,
                                          const DetectConfig& cfg = {});

struct InvariantCheck {
  std::string name;
  int passed = 0;
  int failed = 0;
};

struct DetectionReport {
  PotentialSpec potential;
  SymmetryClass symmetry;
  double e_min = 0.0, e_max = 0.0;
  int n_points = 0;
  std::vector<PhenomenonEvent> events;
  std::vector<Conflict> conflicts;
  std::vector<InvariantCheck> invariant_summary;
};

/// Full pipeline: scan, find, classify, and check the structural
/// relations across the grid.
DetectionReport detect(const PotentialSpec& spec, double e_min, double e_max, int n_points,
                       const DetectConfig& cfg = {});

/// Deterministic golden-section minimization to bracket width tol;
/// returns the best abscissa and value seen. Exposed for tests.
struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  double bracket_width = 0.0;
};
GoldenResult golden_minimize(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace cpa
