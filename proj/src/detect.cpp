#include "cpa/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "cpa/errors.hpp"

namespace cpa {

namespace {

int resolve_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("CPA_SCATTER_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

// Static block partition; output slots are preassigned, so the result is
// identical for any worker count.
void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  threads = std::min<long>(threads, n);
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    const long lo = n * w / threads;
    const long hi = n * (w + 1) / threads;
    pool.emplace_back([lo, hi, &body] {
      for (long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> uniform_grid(double lo, double hi, long n) {
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i)
    g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

long coarse_points(double e_min, double e_max, int per_decade) {
  const double decades = std::log10(e_max / e_min);
  return std::max<long>(per_decade, static_cast<long>(std::ceil(per_decade * decades)));
}

void check_range(double e_min, double e_max) {
  if (!(e_min > 0.0 && e_min < e_max))
    throw std::invalid_argument("energy range requires 0 < E_min < E_max");
}

double transmittance(const SchrodingerSolver& solver, double k) {
  return std::norm(solver.solve_left(k).t);
}

double abs_det(const SchrodingerSolver& solver, double k) {
  const Amplitudes l = solver.solve_left(k);
  const Amplitudes r = solver.solve_right(k);
  const Complex t = 0.5 * (l.t + r.t);
  return std::abs(t * t - l.r * r.r);
}

}  // namespace

GoldenResult golden_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a > b) std::swap(a, b);
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iters = 2;
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++iters;
  }
  GoldenResult out;
  out.bracket_width = b - a;
  out.iterations = iters;
  if (fc < fd) {
    out.x = c;
    out.value = fc;
  } else {
    out.x = d;
    out.value = fd;
  }
  return out;
}

std::vector<ScanPoint> scan(const PotentialSpec& spec, double e_min, double e_max, int n_points,
                            const DetectConfig& cfg) {
  check_range(e_min, e_max);
  if (n_points < 2) throw std::invalid_argument("scan requires n_points >= 2");
  validate(spec);
  SchrodingerSolver solver(spec, cfg.solver);
  const std::vector<double> grid = uniform_grid(std::max(e_min, cfg.e_floor), e_max, n_points);

  std::vector<ScanPoint> out(grid.size());
  parallel_for(static_cast<long>(grid.size()), resolve_threads(cfg.threads), [&](long i) {
    ScanPoint& p = out[i];
    p.E = grid[i];
    const double k = std::sqrt(p.E);
    try {
      p.pos = solver.scattering_at(k);
      p.neg = solver.scattering_at(-k);
    } catch (const std::exception& e) {
      p.failed = true;
      p.error = e.what();
    }
  });
  return out;
}

std::vector<SsFinding> find_spectral_singularities(const PotentialSpec& spec, double e_min,
                                                   double e_max, const DetectConfig& cfg) {
  check_range(e_min, e_max);
  validate(spec);
  SchrodingerSolver solver(spec, cfg.solver);
  const long n = coarse_points(std::max(e_min, cfg.e_floor), e_max, cfg.points_per_decade);
  const std::vector<double> grid = uniform_grid(std::max(e_min, cfg.e_floor), e_max, n);

  std::vector<SsFinding> findings;
  for (const double sign : {1.0, -1.0}) {
    std::vector<double> g(n);
    parallel_for(n, resolve_threads(cfg.threads), [&](long i) {
      const double T = transmittance(solver, sign * std::sqrt(grid[i]));
      g[i] = T > 0.0 ? 1.0 / T : std::numeric_limits<double>::infinity();
    });
    for (long i = 1; i + 1 < n; ++i) {
      if (!(g[i] < cfg.g_trigger && g[i] <= g[i - 1] && g[i] <= g[i + 1])) continue;
      double ka = sign * std::sqrt(grid[i - 1]);
      double kb = sign * std::sqrt(grid[i + 1]);
      const GoldenResult res = golden_minimize(
          [&](double k) { return 1.0 / transmittance(solver, k); }, std::min(ka, kb),
          std::max(ka, kb), cfg.bracket_k_tol);
      const double T = 1.0 / res.value;
      if (!(T > cfg.t_ss_accept)) continue;
      SsFinding f;
      f.k = res.x;
      f.E = res.x * res.x;
      f.T = T;
      f.iterations = res.iterations;
      f.bracket_width = res.bracket_width;
      f.strict = T > cfg.t_huge;
      findings.push_back(f);
    }
  }
  std::sort(findings.begin(), findings.end(), [](const SsFinding& l, const SsFinding& r) {
    return l.E != r.E ? l.E < r.E : l.k < r.k;
  });
  // Two adjacent coarse minima can refine into the same pole; keep the
  // sharper finding.
  std::vector<SsFinding> unique;
  for (const SsFinding& f : findings) {
    if (!unique.empty() && unique.back().k * f.k > 0.0 &&
        std::abs(unique.back().k - f.k) < 10.0 * cfg.bracket_k_tol) {
      if (f.T > unique.back().T) unique.back() = f;
      continue;
    }
    unique.push_back(f);
  }
  return unique;
}

std::vector<CpaFinding> find_cpa(const PotentialSpec& spec, double e_min, double e_max,
                                 const DetectConfig& cfg) {
  check_range(e_min, e_max);
  validate(spec);
  SchrodingerSolver solver(spec, cfg.solver);
  const long n = coarse_points(std::max(e_min, cfg.e_floor), e_max, cfg.points_per_decade);
  const std::vector<double> grid = uniform_grid(std::max(e_min, cfg.e_floor), e_max, n);

  std::vector<double> d(n);
  parallel_for(n, resolve_threads(cfg.threads), [&](long i) {
    d[i] = abs_det(solver, std::sqrt(grid[i]));
  });

  std::vector<CpaFinding> findings;
  for (long i = 1; i + 1 < n; ++i) {
    if (!(d[i] < cfg.cpa_trigger && d[i] <= d[i - 1] && d[i] <= d[i + 1])) continue;
    const GoldenResult res =
        golden_minimize([&](double k) { return abs_det(solver, k); }, std::sqrt(grid[i - 1]),
                        std::sqrt(grid[i + 1]), cfg.bracket_k_tol);
    if (!(res.value < cfg.tol_cpa)) continue;
    CpaFinding f;
    f.E = res.x * res.x;
    f.abs_det_s = res.value;
    f.iterations = res.iterations;
    f.bracket_width = res.bracket_width;
    f.T_pos = transmittance(solver, res.x);
    f.T_neg = transmittance(solver, -res.x);
    f.reversed_ss_found = f.T_neg > cfg.t_ss_accept;
    f.reversed_ss_strict = f.T_neg > cfg.t_huge;
    findings.push_back(f);
  }
  std::sort(findings.begin(), findings.end(),
            [](const CpaFinding& l, const CpaFinding& r) { return l.E < r.E; });
  std::vector<CpaFinding> unique;
  for (const CpaFinding& f : findings) {
    if (!unique.empty() && std::abs(std::sqrt(unique.back().E) - std::sqrt(f.E)) <
                               10.0 * cfg.bracket_k_tol) {
      if (f.abs_det_s < unique.back().abs_det_s) unique.back() = f;
      continue;
    }
    unique.push_back(f);
  }
  return unique;
}

Classification classify_events(const std::vector<SsFinding>& ss, const std::vector<CpaFinding>& cpa,
                               const PotentialSpec& spec, const DetectConfig& cfg) {
  Classification out;
  SchrodingerSolver solver(spec, cfg.solver);
  std::vector<bool> consumed(ss.size(), false);

  // Strict poles in both channels at one energy, with |det S| holding 1
  // just off it: CPA and lasing together.
  for (std::size_t i = 0; i < ss.size(); ++i) {
    if (consumed[i] || !ss[i].strict) continue;
    for (std::size_t j = i + 1; j < ss.size(); ++j) {
      if (consumed[j] || !ss[j].strict) continue;
      if (ss[i].k * ss[j].k >= 0.0) continue;
      if (std::abs(ss[i].E - ss[j].E) > cfg.e_match) continue;
      const double e_star = 0.5 * (ss[i].E + ss[j].E);
      const double d_lo = abs_det(solver, std::sqrt(e_star - cfg.eps_e));
      const double d_hi = abs_det(solver, std::sqrt(e_star + cfg.eps_e));
      if (std::abs(d_lo - 1.0) > cfg.tol_one || std::abs(d_hi - 1.0) > cfg.tol_one) {
        out.conflicts.push_back(
            {e_star, "divergent transmission in both channels but |det S| leaves 1 nearby"});
        continue;
      }
      const SsFinding& pos = ss[i].k > 0.0 ? ss[i] : ss[j];
      const SsFinding& neg = ss[i].k > 0.0 ? ss[j] : ss[i];
      PhenomenonEvent ev;
      ev.kind = EventKind::CpaWithLasing;
      ev.E = e_star;
      ev.k = std::sqrt(e_star);
      ev.diagnostics = {pos.T, neg.T, 0.5 * (d_lo + d_hi),
                        std::max(pos.iterations, neg.iterations),
                        std::max(pos.bracket_width, neg.bracket_width), true};
      out.events.push_back(ev);
      consumed[i] = consumed[j] = true;
      break;
    }
  }

  // A |det S| zero with a finite forward channel and a time-reversed
  // singularity: CPA without lasing.
  for (const CpaFinding& c : cpa) {
    int matched = -1;
    for (std::size_t j = 0; j < ss.size(); ++j) {
      if (!consumed[j] && ss[j].k < 0.0 && std::abs(ss[j].E - c.E) <= cfg.e_match) {
        matched = static_cast<int>(j);
        break;
      }
    }
    if (c.T_pos >= cfg.t_finite) {
      out.conflicts.push_back({c.E, "|det S| vanishes but the forward transmittance is not finite"});
      continue;
    }
    if (matched < 0 && !c.reversed_ss_found) {
      out.conflicts.push_back({c.E, "|det S| vanishes without a time-reversed singularity"});
      continue;
    }
    PhenomenonEvent ev;
    ev.kind = EventKind::CpaOnly;
    ev.E = c.E;
    ev.k = std::sqrt(c.E);
    const bool strict = matched >= 0 ? ss[matched].strict : c.reversed_ss_strict;
    const double t_neg = matched >= 0 ? ss[matched].T : c.T_neg;
    ev.diagnostics = {c.T_pos, t_neg, c.abs_det_s, c.iterations, c.bracket_width, strict};
    out.events.push_back(ev);
    if (matched >= 0) consumed[matched] = true;
  }

  for (std::size_t i = 0; i < ss.size(); ++i) {
    if (consumed[i]) continue;
    PhenomenonEvent ev;
    ev.kind = EventKind::SpectralSingularity;
    ev.E = ss[i].E;
    ev.k = ss[i].k;
    const double t_pos = ss[i].k > 0.0 ? ss[i].T : transmittance(solver, -ss[i].k);
    const double t_neg = ss[i].k > 0.0 ? transmittance(solver, -ss[i].k) : ss[i].T;
    ev.diagnostics = {t_pos, t_neg, abs_det(solver, std::abs(ss[i].k)), ss[i].iterations,
                      ss[i].bracket_width, ss[i].strict};
    out.events.push_back(ev);
  }

  std::sort(out.events.begin(), out.events.end(), [](const PhenomenonEvent& l, const PhenomenonEvent& r) {
    if (l.E != r.E) return l.E < r.E;
    if (l.kind != r.kind) return l.kind < r.kind;
    return l.k < r.k;
  });
  std::sort(out.conflicts.begin(), out.conflicts.end(),
            [](const Conflict& l, const Conflict& r) { return l.E < r.E; });
  return out;
}

ConjectureCheck check_unbroken_conjecture(const PotentialSpec& spec, double e_min, double e_max,
                                          const DetectConfig& cfg) {
  ConjectureCheck out;
  const SymmetryClass sym = classify_symmetry(spec);
  if (sym.pt_phase) out.has_real_spectrum_criterion = (*sym.pt_phase == PtPhase::Unbroken);
  out.ss_found = !find_spectral_singularities(spec, e_min, e_max, cfg).empty();
  out.cpa_found = !find_cpa(spec, e_min, e_max, cfg).empty();
  return out;
}

namespace {

// Structural-relation tallies over the scan, on points far enough from
// any singular structure that the tolerances are meaningful.
std::vector<InvariantCheck> summarize_invariants(const std::vector<ScanPoint>& points,
                                                 const SymmetryClass& sym) {
  InvariantCheck eq1{"transmission_consistency", 0, 0};
  InvariantCheck eq2{"pt_time_reversal", 0, 0};
  InvariantCheck eq3{"nonreciprocal_time_reversal", 0, 0};
  InvariantCheck eq4{"pt_phase_locking", 0, 0};
  InvariantCheck eq6{"pt_unimodularity", 0, 0};
  InvariantCheck eq8{"det_evenness", 0, 0};
  InvariantCheck herm{"hermitian_unitarity", 0, 0};

  const bool pt = sym.kind == SymmetryKind::PTSymmetric;
  const bool hermitian = sym.kind == SymmetryKind::Hermitian;
  const bool nonreciprocal = !pt && !hermitian;

  for (const ScanPoint& p : points) {
    if (p.failed) {
      if (p.error.find("transmission") != std::string::npos) ++eq1.failed;
      continue;
    }
    ++eq1.passed;
    const bool quiet = !p.pos.capped && !p.neg.capped && p.pos.T < 100.0 && p.neg.T < 100.0;
    if (!quiet) continue;

    if (pt) {
      const bool ok2 = std::abs(p.neg.T - p.pos.T) <= 1e-6 * std::max(1.0, p.pos.T) &&
                       std::abs(p.neg.R_left - p.pos.R_right) <= 1e-6 * std::max(1.0, p.pos.R_right);
      (ok2 ? eq2.passed : eq2.failed)++;
      const SMatrixChecks chk = check_pt_relations(p.pos, sym);
      if (chk.phase_residual_left && chk.phase_residual_right) {
        const bool ok4 = *chk.phase_residual_left < 1e-4 && *chk.phase_residual_right < 1e-4;
        (ok4 ? eq4.passed : eq4.failed)++;
      }
      if (chk.unimodularity_residual) {
        (*chk.unimodularity_residual < 1e-6 ? eq6.passed : eq6.failed)++;
      }
      const bool ok8 = std::abs(p.pos.abs_det_s - p.neg.abs_det_s) <=
                       1e-6 * std::max(1.0, p.pos.abs_det_s);
      (ok8 ? eq8.passed : eq8.failed)++;
    }
    if (hermitian) {
      const bool ok = std::abs(p.pos.T + p.pos.R_left - 1.0) < 1e-8;
      (ok ? herm.passed : herm.failed)++;
    }
    if (nonreciprocal) {
      const double rel = std::abs(p.neg.T - p.pos.T) / std::max(p.pos.T, 1e-300);
      (rel > 1e-3 ? eq3.passed : eq3.failed)++;
    }
  }

  std::vector<InvariantCheck> out;
  out.push_back(eq1);
  if (pt) {
    out.push_back(eq2);
    out.push_back(eq4);
    out.push_back(eq6);
    out.push_back(eq8);
  }
  if (hermitian) out.push_back(herm);
  if (nonreciprocal) out.push_back(eq3);
  return out;
}

}  // namespace

DetectionReport detect(const PotentialSpec& spec, double e_min, double e_max, int n_points,
                       const DetectConfig& cfg) {
  DetectionReport report;
  report.potential = spec;
  report.symmetry = classify_symmetry(spec);
  report.e_min = e_min;
  report.e_max = e_max;
  report.n_points = n_points;

  const std::vector<ScanPoint> points = scan(spec, e_min, e_max, n_points, cfg);
  const auto ss = find_spectral_singularities(spec, e_min, e_max, cfg);
  const auto cpa = find_cpa(spec, e_min, e_max, cfg);
  Classification cls = classify_events(ss, cpa, spec, cfg);
  report.events = std::move(cls.events);
  report.conflicts = std::move(cls.conflicts);
  report.invariant_summary = summarize_invariants(points, report.symmetry);
  return report;
}

}  // namespace cpa
