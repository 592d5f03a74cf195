#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cpa/detect.hpp"
#include "cpa/potential.hpp"

#include "json.hpp"

namespace cpa {

/// Parses a potential description. Expected shape:
///   {"family": "scarf2" | "rectangular" | "gaussian" | "tabulated", ...}
/// with family-specific fields:
///   scarf2:      {"P": [re, im], "Q": [re, im]} or one of the shorthands
///                {"absorptive_d": d}, {"broken_pt_c": c},
///                {"unbroken_ab": [a, b]}
///   rectangular: {"P": [re, im], "Q": q, "L": l}
///   gaussian:    {"P": [re, im], "Q": q}
///   tabulated:   {"x": [...], "v": [[re, im], ...]}
/// Unknown fields are rejected (ConfigError), so typos never silently
/// fall back to defaults.
PotentialSpec potential_from_json(const nlohmann::json& j);
PotentialSpec potential_from_file(const std::string& path);

/// Inverse of potential_from_json: named Scarf forms serialize through
/// their shorthand so a round trip preserves the form tag.
nlohmann::json potential_to_json(const PotentialSpec& spec);

/// Scan table as CSV, full double precision (%.17g). Columns:
/// E,k,T_pos,T_neg,R_left_pos,R_right_pos,R_left_neg,R_right_neg,
/// absDetS_pos,absDetS_neg,flags
/// where flags is empty, "POLE" (a capped channel) or "ERROR:<what>".
void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points);

/// Round-trip reader for the numeric columns of write_scan_csv output.
struct ScanCsvRow {
  double E, k, T_pos, T_neg, R_left_pos, R_right_pos, R_left_neg, R_right_neg,
      absDetS_pos, absDetS_neg;
  std::string flags;
};
std::vector<ScanCsvRow> read_scan_csv(std::istream& is);

nlohmann::json scan_to_json(const std::vector<ScanPoint>& points);
nlohmann::json report_to_json(const DetectionReport& report);

/// Plot-ready whitespace tables, one file per panel:
///   <stem>_a.dat  E  T(+k)  T(-k)
///   <stem>_b.dat  E  R_left(+k)  R_right(+k)  R_left(-k)  R_right(-k)
///   <stem>_c.dat  E  |det S|(+k)  |det S|(-k)
/// Values at capped points are written as the cap with a "# POLE" remark.
void write_plot_data(const std::string& stem, const std::vector<ScanPoint>& points);

std::string event_kind_name(EventKind kind);
std::string symmetry_kind_name(SymmetryKind kind);

}  // namespace cpa
