#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cpa/detect.hpp"
#include "cpa/errors.hpp"
#include "cpa/io.hpp"
#include "cpa/potential.hpp"
#include "cpa/scarf_analytic.hpp"
#include "cpa/smatrix.hpp"
#include "cpa/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoOracle = 4;

struct PotentialFlags {
  std::string file;
  std::vector<double> scarf_absorptive;   // d
  std::vector<double> scarf_broken;       // c
  std::vector<double> scarf_unbroken;     // a b
  std::vector<double> p_pair;             // re im
  double q = 0.0;
  double length = 1.0;
  bool scarf2 = false, rectangular = false, gaussian = false;

  void attach(CLI::App* app) {
    app->add_option("--potential", file, "JSON potential description file");
    app->add_option("--scarf2-absorptive", scarf_absorptive,
                    "Scarf II absorptive form, parameter d")
        ->expected(1);
    app->add_option("--scarf2-broken-pt", scarf_broken, "Scarf II broken-PT form, parameter c")
        ->expected(1);
    app->add_option("--scarf2-unbroken", scarf_unbroken, "Scarf II unbroken-PT form, parameters a b")
        ->expected(2);
    app->add_flag("--scarf2", scarf2, "generic Scarf II with --P/--Q");
    app->add_flag("--rectangular", rectangular, "rectangular profile with --P/--Q/--L");
    app->add_flag("--gaussian", gaussian, "Gaussian profile with --P/--Q");
    app->add_option("--P", p_pair, "potential strength, re im")->expected(2);
    app->add_option("--Q", q, "odd-part strength (real)");
    app->add_option("--L", length, "rectangular half-width");
  }

  cpa::PotentialSpec build() const {
    const int n = !file.empty() + !scarf_absorptive.empty() + !scarf_broken.empty() +
                  !scarf_unbroken.empty() + scarf2 + rectangular + gaussian;
    if (n == 0) throw cpa::ConfigError("no potential given (see --help)");
    if (n > 1) throw cpa::ConfigError("more than one potential given");
    if (!file.empty()) return cpa::potential_from_file(file);
    if (!scarf_absorptive.empty()) return cpa::ScarfII::absorptive(scarf_absorptive[0]);
    if (!scarf_broken.empty()) return cpa::ScarfII::broken_pt(scarf_broken[0]);
    if (!scarf_unbroken.empty())
      return cpa::ScarfII::unbroken(scarf_unbroken[0], scarf_unbroken[1]);
    if (p_pair.size() != 2) throw cpa::ConfigError("this potential form requires --P re im");
    const cpa::Complex p(p_pair[0], p_pair[1]);
    if (scarf2) {
      cpa::ScarfII s;
      s.P = p;
      s.Q = cpa::Complex(0.0, q);  // odd-part strength enters as i*Q*sech*tanh
      return s;
    }
    if (rectangular) return cpa::Rectangular{p, q, length};
    return cpa::Gaussian{p, q};
  }
};

struct RangeFlags {
  std::string range = "0.25:9:200";

  void attach(CLI::App* app) {
    app->add_option("--range", range, "energy window Emin:Emax:N (N = points)");
  }

  void parse(double& e_min, double& e_max, int& n) const {
    std::stringstream ss(range);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':'))
      throw cpa::ConfigError("--range must be Emin:Emax:N");
    std::getline(ss, c, ':');
    try {
      e_min = std::stod(a);
      e_max = std::stod(b);
      n = c.empty() ? 200 : std::stoi(c);
    } catch (const std::exception&) {
      throw cpa::ConfigError("--range must be numeric Emin:Emax:N");
    }
    if (!(e_min > 0.0 && e_min < e_max && n >= 2))
      throw cpa::ConfigError("--range requires 0 < Emin < Emax and N >= 2");
  }
};

struct SolverFlags {
  double step = 1e-3;
  double x_max = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--step", step, "integration step (default 1e-3)");
    app->add_option("--xmax", x_max, "truncation radius (default: family tail)");
  }

  cpa::SolverConfig build() const { return {step, x_max, cpa::IntegratorMethod::Rk4}; }
};

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw cpa::ConfigError("cannot open output file: " + path);
  return file;
}

int run_scan(const PotentialFlags& pf, const RangeFlags& rf, const SolverFlags& sf,
             const std::string& out, const std::string& format) {
  double e_min, e_max;
  int n;
  rf.parse(e_min, e_max, n);
  cpa::DetectConfig cfg;
  cfg.solver = sf.build();
  const auto points = cpa::scan(pf.build(), e_min, e_max, n, cfg);

  std::ofstream file;
  std::ostream& os = open_out(file, out);
  if (format == "csv") {
    cpa::write_scan_csv(os, points);
  } else if (format == "json") {
    os << cpa::scan_to_json(points).dump(2) << '\n';
  } else {
    throw cpa::ConfigError("--format must be csv or json");
  }
  return kExitOk;
}

int run_detect(const PotentialFlags& pf, const RangeFlags& rf, const SolverFlags& sf,
               const std::string& out) {
  double e_min, e_max;
  int n;
  rf.parse(e_min, e_max, n);
  cpa::DetectConfig cfg;
  cfg.solver = sf.build();
  const cpa::DetectionReport report = cpa::detect(pf.build(), e_min, e_max, n, cfg);

  std::ofstream file;
  std::ostream& os = open_out(file, out);
  os << cpa::report_to_json(report).dump(2) << '\n';
  return kExitOk;
}

int run_plot_data(const PotentialFlags& pf, const RangeFlags& rf, const SolverFlags& sf,
                  const std::string& tag) {
  double e_min, e_max;
  int n;
  rf.parse(e_min, e_max, n);
  cpa::DetectConfig cfg;
  cfg.solver = sf.build();
  const auto points = cpa::scan(pf.build(), e_min, e_max, n, cfg);
  cpa::write_plot_data(tag, points);
  std::cout << "wrote " << tag << "_a.dat " << tag << "_b.dat " << tag << "_c.dat\n";
  return kExitOk;
}

int run_bound_states(const PotentialFlags& pf) {
  const cpa::PotentialSpec spec = pf.build();
  const auto* scarf = std::get_if<cpa::ScarfII>(&spec);
  if (!scarf || scarf->form != cpa::ScarfForm::UnbrokenAb)
    throw cpa::ConfigError("bound-states requires the Scarf II unbroken form (--scarf2-unbroken a b)");
  for (const cpa::BoundState& s : cpa::bound_state_energies(*scarf))
    std::printf("E = %+.15g  (branch %d, index %d)\n", s.energy, s.branch, s.index);
  return kExitOk;
}

// Compares the integrator against a closed form on the energy grid:
// Scarf II named forms against the analytic expressions (relative 1e-4 on
// T and both R away from poles), rectangular against the slab transfer
// matrix (absolute 1e-10 on the complex amplitudes).
int run_validate(const PotentialFlags& pf, const RangeFlags& rf, const SolverFlags& sf) {
  double e_min, e_max;
  int n;
  rf.parse(e_min, e_max, n);
  const cpa::PotentialSpec spec = pf.build();
  const cpa::SchrodingerSolver solver(spec, sf.build());

  const auto* scarf = std::get_if<cpa::ScarfII>(&spec);
  const auto* rect = std::get_if<cpa::Rectangular>(&spec);
  if ((!scarf || scarf->form == cpa::ScarfForm::Generic) && !rect) {
    std::fprintf(stderr, "validate: no closed-form oracle for this potential\n");
    return kExitNoOracle;
  }

  int checked = 0, failed = 0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = e_min + (e_max - e_min) * i / (n - 1);
    const double k = std::sqrt(e);
    for (const double sk : {k, -k}) {
      if (rect) {
        const auto exact = cpa::transfer_matrix_rectangular(rect->P, rect->Q, rect->L, sk);
        const auto left = solver.solve_left(sk);
        const auto right = solver.solve_right(sk);
        const double err = std::max({std::abs(left.t - exact.t), std::abs(left.r - exact.r_left),
                                     std::abs(right.r - exact.r_right)});
        ++checked;
        worst = std::max(worst, err);
        if (!(err < 1e-10)) ++failed;
        continue;
      }
      cpa::AnalyticPoint ref;
      switch (scarf->form) {
        case cpa::ScarfForm::AbsorptiveD: ref = cpa::domain_a_point(sk, scarf->d); break;
        case cpa::ScarfForm::BrokenPtC: ref = cpa::domain_b_point(sk, scarf->c); break;
        default: ref = cpa::domain_c_point(sk, scarf->a, scarf->b); break;
      }
      if (ref.at_pole || ref.at_indeterminacy || ref.T > 1e6) continue;  // not comparable
      const cpa::ScatteringPoint num = solver.scattering_at(sk);
      const double err =
          std::max({std::abs(num.T - ref.T) / std::max(1e-300, std::abs(ref.T)),
                    std::abs(num.R_left - ref.R_left) / std::max(1.0, ref.R_left),
                    std::abs(num.R_right - ref.R_right) / std::max(1.0, ref.R_right)});
      ++checked;
      worst = std::max(worst, err);
      if (!(err < 1e-4)) ++failed;
    }
  }
  std::printf("validate: %d comparisons, %d failures, worst deviation %.3g\n", checked, failed,
              worst);
  return failed == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherent scattering observables of 1-D complex potentials"};
  app.require_subcommand(1);

  PotentialFlags pf;
  RangeFlags rf;
  SolverFlags sf;
  std::string out;
  std::string format = "csv";
  std::string tag = "scan";

  CLI::App* c_scan = app.add_subcommand("scan", "tabulate T, R and |det S| over an energy window");
  pf.attach(c_scan);
  rf.attach(c_scan);
  sf.attach(c_scan);
  c_scan->add_option("--out", out, "output file (default stdout)");
  c_scan->add_option("--format", format, "csv or json");

  CLI::App* c_detect =
      app.add_subcommand("detect", "find and classify spectral singularities and CPA points");
  pf.attach(c_detect);
  rf.attach(c_detect);
  sf.attach(c_detect);
  c_detect->add_option("--out", out, "output file (default stdout)");

  CLI::App* c_validate =
      app.add_subcommand("validate", "compare the integrator against a closed-form oracle");
  pf.attach(c_validate);
  rf.attach(c_validate);
  sf.attach(c_validate);

  CLI::App* c_bound = app.add_subcommand("bound-states", "discrete spectrum of the unbroken form");
  pf.attach(c_bound);

  CLI::App* c_plot = app.add_subcommand("plot-data", "write three-panel plot tables");
  pf.attach(c_plot);
  rf.attach(c_plot);
  sf.attach(c_plot);
  c_plot->add_option("--tag", tag, "output file stem");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_scan->parsed()) return run_scan(pf, rf, sf, out, format);
    if (c_detect->parsed()) return run_detect(pf, rf, sf, out);
    if (c_validate->parsed()) return run_validate(pf, rf, sf);
    if (c_bound->parsed()) return run_bound_states(pf);
    return run_plot_data(pf, rf, sf, tag);
  } catch (const cpa::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  }
}
