#include "cpa/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cpa/errors.hpp"

namespace cpa {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

void require_fields(const json& j, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad("unknown field \"" + it.key() + "\" in potential config");
}

double get_number(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  if (!j[key].is_number()) bad(std::string("field \"") + key + "\" must be a number");
  return j[key].get<double>();
}

Complex get_complex(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  const json& v = j[key];
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  bad(std::string("field \"") + key + "\" must be a number or [re, im]");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PotentialSpec potential_from_json(const json& j) {
  if (!j.is_object()) bad("potential config must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string())
    bad("potential config requires a string \"family\" field");
  const std::string family = j["family"].get<std::string>();

  if (family == "scarf2") {
    const bool has_d = j.contains("absorptive_d");
    const bool has_c = j.contains("broken_pt_c");
    const bool has_ab = j.contains("unbroken_ab");
    if (has_d + has_c + has_ab > 1) bad("scarf2 accepts at most one named-form shorthand");
    if (has_d) {
      require_fields(j, {"family", "absorptive_d"});
      return ScarfII::absorptive(get_number(j, "absorptive_d"));
    }
    if (has_c) {
      require_fields(j, {"family", "broken_pt_c"});
      return ScarfII::broken_pt(get_number(j, "broken_pt_c"));
    }
    if (has_ab) {
      require_fields(j, {"family", "unbroken_ab"});
      const json& ab = j["unbroken_ab"];
      if (!ab.is_array() || ab.size() != 2 || !ab[0].is_number() || !ab[1].is_number())
        bad("\"unbroken_ab\" must be [a, b]");
      return ScarfII::unbroken(ab[0].get<double>(), ab[1].get<double>());
    }
    require_fields(j, {"family", "P", "Q"});
    ScarfII s;
    s.P = get_complex(j, "P");
    s.Q = get_complex(j, "Q");
    return s;
  }

  if (family == "rectangular") {
    require_fields(j, {"family", "P", "Q", "L"});
    Rectangular r;
    r.P = get_complex(j, "P");
    r.Q = j.contains("Q") ? get_number(j, "Q") : 0.0;
    r.L = j.contains("L") ? get_number(j, "L") : 1.0;
    return r;
  }

  if (family == "gaussian") {
    require_fields(j, {"family", "P", "Q"});
    Gaussian g;
    g.P = get_complex(j, "P");
    g.Q = j.contains("Q") ? get_number(j, "Q") : 0.0;
    return g;
  }

  if (family == "tabulated") {
    require_fields(j, {"family", "x", "v"});
    if (!j.contains("x") || !j.contains("v") || !j["x"].is_array() || !j["v"].is_array())
      bad("tabulated requires array fields \"x\" and \"v\"");
    Tabulated t;
    for (const json& xv : j["x"]) {
      if (!xv.is_number()) bad("tabulated \"x\" entries must be numbers");
      t.x.push_back(xv.get<double>());
    }
    for (const json& vv : j["v"]) {
      if (vv.is_number())
        t.v.emplace_back(vv.get<double>(), 0.0);
      else if (vv.is_array() && vv.size() == 2 && vv[0].is_number() && vv[1].is_number())
        t.v.emplace_back(vv[0].get<double>(), vv[1].get<double>());
      else
        bad("tabulated \"v\" entries must be numbers or [re, im]");
    }
    return t;
  }

  bad("unknown potential family \"" + family + "\"");
}

PotentialSpec potential_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open potential file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad("invalid JSON in " + path + ": " + e.what());
  }
  return potential_from_json(j);
}

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json potential_to_json(const PotentialSpec& spec) {
  json j;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ScarfII>) {
          j["family"] = "scarf2";
          switch (p.form) {
            case ScarfForm::AbsorptiveD:
              j["absorptive_d"] = p.d;
              break;
            case ScarfForm::BrokenPtC:
              j["broken_pt_c"] = p.c;
              break;
            case ScarfForm::UnbrokenAb:
              j["unbroken_ab"] = json::array({p.a, p.b});
              break;
            case ScarfForm::Generic:
              j["P"] = complex_to_json(p.P);
              j["Q"] = complex_to_json(p.Q);
              break;
          }
        } else if constexpr (std::is_same_v<P, Rectangular>) {
          j["family"] = "rectangular";
          j["P"] = complex_to_json(p.P);
          j["Q"] = p.Q;
          j["L"] = p.L;
        } else if constexpr (std::is_same_v<P, Gaussian>) {
          j["family"] = "gaussian";
          j["P"] = complex_to_json(p.P);
          j["Q"] = p.Q;
        } else {
          j["family"] = "tabulated";
          j["x"] = p.x;
          json v = json::array();
          for (const Complex& z : p.v) v.push_back(complex_to_json(z));
          j["v"] = std::move(v);
        }
      },
      spec);
  return j;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points) {
  os << "E,k,T_pos,T_neg,R_left_pos,R_right_pos,R_left_neg,R_right_neg,"
        "absDetS_pos,absDetS_neg,flags\n";
  for (const ScanPoint& p : points) {
    const double k = std::sqrt(p.E);
    if (p.failed) {
      std::string what = p.error;
      for (char& ch : what)
        if (ch == ',' || ch == '\n') ch = ';';
      os << fmt(p.E) << ',' << fmt(k) << ",,,,,,,,,ERROR:" << what << '\n';
      continue;
    }
    os << fmt(p.E) << ',' << fmt(k) << ',' << fmt(p.pos.T) << ',' << fmt(p.neg.T) << ','
       << fmt(p.pos.R_left) << ',' << fmt(p.pos.R_right) << ',' << fmt(p.neg.R_left) << ','
       << fmt(p.neg.R_right) << ',' << fmt(p.pos.abs_det_s) << ',' << fmt(p.neg.abs_det_s) << ','
       << ((p.pos.capped || p.neg.capped) ? "POLE" : "") << '\n';
  }
}

std::vector<ScanCsvRow> read_scan_csv(std::istream& is) {
  std::vector<ScanCsvRow> rows;
  std::string line;
  if (!std::getline(is, line)) return rows;  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 11) cells.emplace_back();
    ScanCsvRow r{};
    auto num = [&](int i) { return cells[i].empty() ? std::nan("") : std::stod(cells[i]); };
    r.E = num(0);
    r.k = num(1);
    r.T_pos = num(2);
    r.T_neg = num(3);
    r.R_left_pos = num(4);
    r.R_right_pos = num(5);
    r.R_left_neg = num(6);
    r.R_right_neg = num(7);
    r.absDetS_pos = num(8);
    r.absDetS_neg = num(9);
    r.flags = cells[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

json scan_to_json(const std::vector<ScanPoint>& points) {
  json arr = json::array();
  for (const ScanPoint& p : points) {
    json row;
    row["E"] = p.E;
    row["k"] = std::sqrt(p.E);
    if (p.failed) {
      row["error"] = p.error;
    } else {
      row["T_pos"] = p.pos.T;
      row["T_neg"] = p.neg.T;
      row["R_left_pos"] = p.pos.R_left;
      row["R_right_pos"] = p.pos.R_right;
      row["R_left_neg"] = p.neg.R_left;
      row["R_right_neg"] = p.neg.R_right;
      row["absDetS_pos"] = p.pos.abs_det_s;
      row["absDetS_neg"] = p.neg.abs_det_s;
      if (p.pos.capped || p.neg.capped) row["pole"] = true;
    }
    arr.push_back(std::move(row));
  }
  return arr;
}

std::string event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::SpectralSingularity: return "SpectralSingularity";
    case EventKind::CpaOnly: return "CpaOnly";
    case EventKind::CpaWithLasing: return "CpaWithLasing";
  }
  return "?";
}

std::string symmetry_kind_name(SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::Hermitian: return "Hermitian";
    case SymmetryKind::PSymmetricNonHermitian: return "PSymmetricNonHermitian";
    case SymmetryKind::PTSymmetric: return "PTSymmetric";
    case SymmetryKind::NonPT: return "NonPT";
  }
  return "?";
}

json report_to_json(const DetectionReport& report) {
  json j;
  j["potential"] = potential_to_json(report.potential);
  j["symmetry"]["kind"] = symmetry_kind_name(report.symmetry.kind);
  if (report.symmetry.pt_phase)
    j["symmetry"]["pt_phase"] =
        *report.symmetry.pt_phase == PtPhase::Unbroken ? "Unbroken" : "Broken";
  j["range"] = {{"e_min", report.e_min}, {"e_max", report.e_max}, {"n_points", report.n_points}};

  json events = json::array();
  for (const PhenomenonEvent& e : report.events) {
    json row;
    row["kind"] = event_kind_name(e.kind);
    row["E"] = e.E;
    row["k"] = e.k;
    row["diagnostics"] = {{"T_pos", e.diagnostics.T_pos},
                          {"T_neg", e.diagnostics.T_neg},
                          {"abs_det_s", e.diagnostics.abs_det_s},
                          {"refinement_iterations", e.diagnostics.refinement_iterations},
                          {"bracket_width", e.diagnostics.bracket_width},
                          {"strict_pole", e.diagnostics.strict_pole}};
    events.push_back(std::move(row));
  }
  j["events"] = std::move(events);

  json conflicts = json::array();
  for (const Conflict& c : report.conflicts)
    conflicts.push_back({{"E", c.E}, {"reason", c.reason}});
  j["conflicts"] = std::move(conflicts);

  json invariants = json::array();
  for (const InvariantCheck& c : report.invariant_summary)
    invariants.push_back({{"name", c.name}, {"passed", c.passed}, {"failed", c.failed}});
  j["invariant_summary"] = std::move(invariants);
  return j;
}

namespace {

void write_panel(const std::string& path, const std::vector<ScanPoint>& points,
                 const std::string& header,
                 const std::function<std::vector<double>(const ScanPoint&)>& columns) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path);
  os << "# " << header << '\n';
  for (const ScanPoint& p : points) {
    if (p.failed) continue;
    os << fmt(p.E);
    for (double v : columns(p)) os << ' ' << fmt(v);
    if (p.pos.capped || p.neg.capped) os << " # POLE";
    os << '\n';
  }
}

}  // namespace

void write_plot_data(const std::string& stem, const std::vector<ScanPoint>& points) {
  write_panel(stem + "_a.dat", points, "E T_pos T_neg",
              [](const ScanPoint& p) { return std::vector<double>{p.pos.T, p.neg.T}; });
  write_panel(stem + "_b.dat", points, "E R_left_pos R_right_pos R_left_neg R_right_neg",
              [](const ScanPoint& p) {
                return std::vector<double>{p.pos.R_left, p.pos.R_right, p.neg.R_left,
                                           p.neg.R_right};
              });
  write_panel(stem + "_c.dat", points, "E absDetS_pos absDetS_neg", [](const ScanPoint& p) {
    return std::vector<double>{p.pos.abs_det_s, p.neg.abs_det_s};
  });
}

}  // namespace cpa
