#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cpa/detect.hpp"
#include "cpa/errors.hpp"
#include "cpa/io.hpp"
#include "cpa/potential.hpp"

using namespace cpa;
using nlohmann::json;

TEST_CASE("potential JSON: every family parses and round-trips") {
  SUBCASE("scarf2 shorthands carry their form tag") {
    const auto spec = potential_from_json(json{{"family", "scarf2"}, {"absorptive_d", 2.0}});
    const auto* s = std::get_if<ScarfII>(&spec);
    REQUIRE(s != nullptr);
    CHECK(s->form == ScarfForm::AbsorptiveD);
    CHECK(s->d == 2.0);
    const json echoed = potential_to_json(spec);
    CHECK(echoed["absorptive_d"] == 2.0);
    const auto again = potential_from_json(echoed);
    CHECK(std::get<ScarfII>(again).P == s->P);
  }

  SUBCASE("generic scarf2 takes complex P and Q") {
    const auto spec = potential_from_json(
        json{{"family", "scarf2"}, {"P", {1.0, -0.5}}, {"Q", {0.0, 2.0}}});
    const auto& s = std::get<ScarfII>(spec);
    CHECK(s.P == Complex(1.0, -0.5));
    CHECK(s.Q == Complex(0.0, 2.0));
    CHECK(s.form == ScarfForm::Generic);
  }

  SUBCASE("unbroken_ab pair") {
    const auto spec =
        potential_from_json(json{{"family", "scarf2"}, {"unbroken_ab", {1.2, 0.8}}});
    const auto& s = std::get<ScarfII>(spec);
    CHECK(s.a == 1.2);
    CHECK(s.b == 0.8);
  }

  SUBCASE("rectangular and gaussian") {
    const auto r = potential_from_json(
        json{{"family", "rectangular"}, {"P", {2.21, -1.091}}, {"Q", 0.0}, {"L", 2.0}});
    CHECK(std::get<Rectangular>(r).L == 2.0);
    const auto g = potential_from_json(json{{"family", "gaussian"}, {"P", {4.0, 0.0}}, {"Q", -6.25}});
    CHECK(std::get<Gaussian>(g).Q == -6.25);
    // round trips
    CHECK(potential_to_json(potential_from_json(potential_to_json(r))) == potential_to_json(r));
    CHECK(potential_to_json(potential_from_json(potential_to_json(g))) == potential_to_json(g));
  }

  SUBCASE("tabulated") {
    const auto t = potential_from_json(
        json{{"family", "tabulated"}, {"x", {-1.0, 0.0, 1.0}}, {"v", {{0.0, 0.0}, {2.0, -1.0}, {0.0, 0.0}}}});
    CHECK(std::get<Tabulated>(t).x.size() == 3);
    CHECK(std::get<Tabulated>(t).v[1] == Complex(2.0, -1.0));
    CHECK(potential_to_json(potential_from_json(potential_to_json(t))) == potential_to_json(t));
  }
}

TEST_CASE("potential JSON: malformed input is rejected loudly") {
  CHECK_THROWS_AS(potential_from_json(json{{"family", "asymptotic"}}), ConfigError);
  CHECK_THROWS_AS(potential_from_json(json{{"P", {1.0, 0.0}}}), ConfigError);
  CHECK_THROWS_AS(
      potential_from_json(json{{"family", "gaussian"}, {"P", {1.0, 0.0}}, {"bogus", 1}}),
      ConfigError);
  CHECK_THROWS_AS(
      potential_from_json(json{{"family", "scarf2"}, {"absorptive_d", 1.0}, {"broken_pt_c", 1.0}}),
      ConfigError);
  CHECK_THROWS_AS(potential_from_json(json{{"family", "scarf2"}, {"unbroken_ab", {1.0}}}),
                  ConfigError);
  CHECK_THROWS_AS(potential_from_json(json{{"family", "rectangular"}, {"P", "big"}}), ConfigError);
  CHECK_THROWS_AS(potential_from_file("/nonexistent/v.json"), ConfigError);
}

TEST_CASE("scan CSV round-trips every numeric column at full precision") {
  const auto points = scan(ScarfII::absorptive(2.0), 0.5, 4.5, 6);
  std::stringstream ss;
  write_scan_csv(ss, points);
  const auto rows = read_scan_csv(ss);
  REQUIRE(rows.size() == points.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].E == points[i].E);  // %.17g round-trip is exact
    CHECK(rows[i].T_pos == points[i].pos.T);
    CHECK(rows[i].T_neg == points[i].neg.T);
    CHECK(rows[i].R_left_pos == points[i].pos.R_left);
    CHECK(rows[i].R_right_neg == points[i].neg.R_right);
    CHECK(rows[i].absDetS_pos == points[i].pos.abs_det_s);
    CHECK(rows[i].flags.empty());
  }
}

TEST_CASE("scan CSV carries POLE and ERROR flags") {
  // Grid hits E = 1 exactly: the self-dual pole of the broken-PT form.
  const auto poley = scan(ScarfII::broken_pt(1.0), 0.5, 1.5, 3);
  std::stringstream ss;
  write_scan_csv(ss, poley);
  const auto rows = read_scan_csv(ss);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].flags == "POLE");

  Tabulated deep;
  deep.x = {-1.0, 1.0};
  deep.v = {Complex(-1e9, 0.0), Complex(-1e9, 0.0)};
  const auto failing = scan(PotentialSpec(deep), 0.5, 2.0, 2);
  std::stringstream ss2;
  write_scan_csv(ss2, failing);
  const auto rows2 = read_scan_csv(ss2);
  REQUIRE(rows2.size() == 2);
  CHECK(rows2[0].flags.rfind("ERROR:", 0) == 0);
}

TEST_CASE("detection report serializes events, conflicts and invariants") {
  const DetectionReport r = detect(ScarfII::absorptive(2.0), 3.0, 5.0, 20);
  const json j = report_to_json(r);
  CHECK(j["potential"]["family"] == "scarf2");
  CHECK(j["symmetry"]["kind"] == "PSymmetricNonHermitian");
  REQUIRE(j["events"].size() == 1);
  CHECK(j["events"][0]["kind"] == "CpaOnly");
  CHECK(j["events"][0]["diagnostics"].contains("strict_pole"));
  CHECK(j.contains("invariant_summary"));
  // Serialization is deterministic: same report, same bytes.
  CHECK(j.dump() == report_to_json(r).dump());
}

TEST_CASE("plot data files carry three panels and POLE remarks") {
  const auto points = scan(ScarfII::broken_pt(1.0), 0.5, 1.5, 3);
  const std::string stem = "/tmp/cpa_io_test_fig";
  write_plot_data(stem, points);
  for (const char* suffix : {"_a.dat", "_b.dat", "_c.dat"}) {
    std::ifstream in(stem + suffix);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    CHECK(text.find("# POLE") != std::string::npos);
    CHECK(text.rfind("# E", 0) == 0);
    std::remove((stem + suffix).c_str());
  }
}
