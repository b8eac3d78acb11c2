// Copyright 2026 The dqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "dqsim/experiments.hpp"
#include "dqsim/output.hpp"

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> errors_of(const json& user, const std::vector<std::string>& sets,
                                   const std::optional<std::string>& exp = std::nullopt) {
  try {
    dqs::resolve_config(user, sets, exp);
  } catch (const dqs::ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_starts_with(const std::vector<std::string>& errs, const std::string& prefix) {
  return std::any_of(errs.begin(), errs.end(), [&](const std::string& m) { return m.rfind(prefix, 0) == 0; });
}

// Non-comment CSV lines split on commas.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dqsim_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("empty config is rejected only for the missing experiment") {
  const json empty = dqs::parse_config_text("", "empty.json");
  CHECK(empty == json::object());
  CHECK(dqs::parse_config_text("  \n\t", "ws.json") == json::object());
  const auto errs = errors_of(empty, {});
  REQUIRE(errs.size() == 1);
  CHECK(errs[0] == "experiment: missing required key");
  // With the tag supplied the paper defaults resolve cleanly.
  const auto cfg = dqs::resolve_config(empty, {}, "fig3");
  CHECK(cfg.experiment == dqs::Experiment::Fig3);
  CHECK(cfg.thetas.size() == 64);
  CHECK(cfg.thetas.back() == doctest::Approx(kPi / 2));
  CHECK(cfg.noise.kappa == doctest::Approx(dqs::angular(10e3)));
  CHECK(cfg.noise.gamma_phi == doctest::Approx(dqs::angular(20e3)));
  CHECK(cfg.device.omega_r == doctest::Approx(dqs::angular(7.5e9)));
  CHECK(cfg.device.fock_cutoff == 5);
  CHECK(cfg.integrator.dt == 2e-12);
}

TEST_CASE("constraint violations name their key path") {
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}, {"noise", {{"kappa", -1.0}}}}, {}), "noise.kappa:"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}}, {"noise.kappa=-5"}), "noise.kappa:"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}, {"model", {{"nn", 3}}}}, {}), "model.nn: unknown key"));
  CHECK(any_starts_with(errors_of(json::object(), {"model.colour=red"}, "fig3"), "model.colour: unknown key"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}, {"protocol", {{"thetas", {0.3, 0.1}}}}}, {}),
                        "protocol.thetas"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}, {"protocol", {{"thetas", {0.1, 4.0}}}}}, {}),
                        "protocol.thetas[1]"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig2-heisenberg"}, {"model", {{"boundary", "twisted"}}}}, {}),
                        "model.boundary"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig2-heisenberg"}, {"model", {{"n", 2}, {"boundary", "periodic"}}}}, {}),
                        "model.boundary"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig2-heisenberg"}, {"protocol", {{"initial_state", "uxu"}}}}, {}),
                        "protocol.initial_state"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}, {"integrator", {{"dt_s", 0}}}}, {}), "integrator.dt_s"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}, {"device", {{"g0_hz", "big"}}}}, {}), "device.g0_hz"));
  CHECK(any_starts_with(errors_of({{"experiment", "bogus"}}, {}), "experiment:"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}}, {}, "table1"), "experiment:"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}}, {"noise=1"}), "noise:"));
  CHECK(any_starts_with(errors_of({{"experiment", "fig3"}}, {"novalue"}), "--set novalue"));
  // Several problems are reported together.
  const auto many = errors_of({{"experiment", "fig3"}, {"noise", {{"kappa", -1.0}, {"gamma_phi", -1.0}}}}, {});
  CHECK(many.size() >= 2);
}

TEST_CASE("parse errors carry line and column") {
  try {
    dqs::parse_config_text("{\n  \"experiment\": \"fig3\",\n  oops\n}", "bad.json");
    FAIL("expected a parse error");
  } catch (const dqs::ConfigError& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].rfind("bad.json:3:", 0) == 0);
  }
}

TEST_CASE("overrides are echoed in the resolved config") {
  const auto cfg = dqs::resolve_config({{"experiment", "fig3"}}, {"integrator.fock_cutoff=7"});
  CHECK(cfg.device.fock_cutoff == 7);
  CHECK(cfg.resolved["integrator"]["fock_cutoff"] == 7);
  const auto cal = dqs::resolve_config(json::object(), {"device.calibration=dispersive-formula"}, "fig3");
  CHECK(cal.calibration == dqs::CouplingCalibration::DispersiveFormula);
  const auto off = dqs::resolve_config(json::object(), {"noise.enabled=false"}, "fig3");
  CHECK(off.noise.kappa == 0.0);
  CHECK(off.noise.gamma_minus == 0.0);
}

TEST_CASE("load_config reads files and reports missing ones") {
  const auto dir = scratch_dir("load");
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "empty.json") << "";
    std::ofstream(dir / "ok.json") << R"({"experiment": "table1", "gates": {"tau_s": 2e-8}})";
  }
  try {
    dqs::load_config(dir / "empty.json", {});
    FAIL("expected a config error");
  } catch (const dqs::ConfigError& e) {
    CHECK(e.errors() == std::vector<std::string>{"experiment: missing required key"});
  }
  CHECK(dqs::load_config(dir / "ok.json", {}).gate_times.tau_s == 2e-8);
  CHECK_THROWS_AS(dqs::load_config(dir / "missing.json", {}), dqs::ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("fig2 defaults") {
  const auto h = dqs::resolve_config(json::object(), {}, "fig2-heisenberg");
  REQUIRE(h.panels.size() == 2);
  CHECK(h.panels[0].name == "a");
  CHECK(h.panels[0].epsilon == 1e-2);
  CHECK(h.panels[0].steps == std::vector<std::size_t>{3, 5});
  CHECK(h.panels[1].epsilon == 5e-2);
  CHECK(h.panels[1].steps == std::vector<std::size_t>{2, 3});
  CHECK(h.thetas.size() == 64);
  CHECK(h.thetas.front() == 0.0);
  CHECK(h.thetas.back() == doctest::Approx(kPi / 4));
  CHECK(h.initial_state == "udu");
  const auto t = dqs::resolve_config(json::object(), {}, "fig2-tfim");
  CHECK(t.panels[0].name == "c");
  CHECK(t.panels[1].name == "d");
  CHECK(t.b == doctest::Approx(t.j));
}

TEST_CASE("fig2 output: columns, gate-error lines and crossover consistency") {
  const auto cfg = dqs::resolve_config(json::object(), {"protocol.theta_points=17", "output.dir=\"unused\""}, "fig2-heisenberg");
  const auto res = dqs::run_fig2(cfg, 2);
  REQUIRE(res.files.size() == 2);
  CHECK(res.files[0].name == "fig2-heisenberg_a.csv");
  CHECK(res.files[1].name == "fig2-heisenberg_b.csv");
  CHECK(res.files[0].contents.find('\r') == std::string::npos);
  CHECK(res.files[0].contents.rfind("# dqsim fig2-heisenberg", 0) == 0);
  CHECK(res.files[0].contents.find("# config_hash " + dqs::config_hash(cfg.resolved)) != std::string::npos);

  const auto rows = csv_rows(res.files[0].contents);
  REQUIRE(rows.size() == 18);
  CHECK(rows[0] == std::vector<std::string>{"theta", "loss_l3", "loss_l5", "gate_error_l3", "gate_error_l5"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][3] == "0.03");
    CHECK(rows[i][4] == "0.05");
  }
  CHECK(rows[1][1] == "0");
  CHECK(csv_rows(res.files[1].contents)[1][3] == "0.1");

  for (std::size_t p = 0; p < 2; ++p) {
    const auto r = csv_rows(res.files[p].contents);
    const auto& curves = res.summary["panels"][p]["curves"];
    for (std::size_t k = 0; k < curves.size(); ++k) {
      const double line = curves[k]["gate_error"].get<double>();
      json expected = nullptr;
      for (std::size_t i = 1; i < r.size(); ++i) {
        if (std::stod(r[i][1 + k]) > line) {
          expected = std::stod(r[i][0]);
          break;
        }
      }
      const auto& got = curves[k]["crossover_theta"];
      CHECK(got.is_null() == expected.is_null());
      if (!got.is_null()) CHECK(got.get<double>() == doctest::Approx(expected.get<double>()).epsilon(1e-8));
    }
  }
}

TEST_CASE("fig2 with theta grid {0} has zero loss") {
  const auto cfg = dqs::resolve_config(json::object(), {"protocol.thetas=[0]"}, "fig2-tfim");
  const auto res = dqs::run_fig2(cfg);
  for (const auto& f : res.files) {
    const auto rows = csv_rows(f.contents);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][1] == "0");
    CHECK(rows[1][2] == "0");
  }
  CHECK(res.summary["panels"][0]["curves"][0]["crossover_theta"].is_null());
}

TEST_CASE("output is deterministic and independent of the output directory and thread count") {
  const auto a = dqs::run_fig2(dqs::resolve_config(json::object(), {"protocol.theta_points=9", "output.dir=x"}, "fig2-heisenberg"), 1);
  const auto b = dqs::run_fig2(dqs::resolve_config(json::object(), {"protocol.theta_points=9", "output.dir=y"}, "fig2-heisenberg"), 3);
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t k = 0; k < a.files.size(); ++k) CHECK(a.files[k].contents == b.files[k].contents);
}

TEST_CASE("json output format") {
  const auto cfg = dqs::resolve_config(json::object(), {"protocol.theta_points=5", "output.format=json"}, "fig2-heisenberg");
  const auto res = dqs::run_fig2(cfg);
  REQUIRE(res.files.size() == 2);
  CHECK(res.files[0].name == "fig2-heisenberg_a.json");
  const json j = json::parse(res.files[0].contents);
  CHECK(j["columns"][0] == "theta");
  CHECK(j["rows"].size() == 5);
  CHECK(j["metadata"]["config_hash"] == dqs::config_hash(cfg.resolved));
}

TEST_CASE("gnuplot scripts on request") {
  const auto cfg = dqs::resolve_config(json::object(), {"protocol.theta_points=3", "output.gnuplot=true"}, "fig2-heisenberg");
  const auto res = dqs::run_fig2(cfg);
  REQUIRE(res.files.size() == 4);
  CHECK(res.files[1].name == "fig2-heisenberg_a.gp");
  CHECK(res.files[1].contents.find("'fig2-heisenberg_a.csv' using 1:2") != std::string::npos);
}

TEST_CASE("table1 rows and cross-checks") {
  const auto cfg = dqs::resolve_config(json::object(), {}, "table1");
  const auto res = dqs::run_table1(cfg);
  const auto rows = csv_rows(res.files.at(0).contents);
  // H_o, I_o for n = 2..6; H_p, I_p for n = 3..6.
  CHECK(rows.size() == 1 + 5 + 4 + 5 + 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == "H_o" && rows[i][1] == "2") CHECK(rows[i][6] == "0");
    CHECK(std::stod(rows[i][4]) == doctest::Approx(std::stod(rows[i][5])).epsilon(1e-8));
  }
  const auto& checks = res.summary["cross_checks"];
  REQUIRE(checks.size() == 3);
  CHECK(checks[1]["model"] == "H_o");
  CHECK(checks[1]["within_20_percent"] == true);
  CHECK(checks[2]["model"] == "I_p");
  CHECK(checks[2]["within_20_percent"] == true);
}

TEST_CASE("bounds experiment reports no violations") {
  const auto cfg = dqs::resolve_config(json::object(), {"protocol.theta_points=9", "bounds.n_list=[3]"}, "bounds");
  const auto res = dqs::run_bounds(cfg);
  CHECK(res.summary["violations"] == 0);
  CHECK(res.summary["cells"] == 4 * 4 * 9);
}

TEST_CASE("fig3 at theta = 0 is a fidelity-one row") {
  const auto cfg = dqs::resolve_config(json::object(), {"protocol.thetas=[0]"}, "fig3");
  const auto res = dqs::run_fig3(cfg);
  const auto rows = csv_rows(res.files.at(0).contents);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"theta", "wall_time_s", "fidelity", "sx_1_ideal", "sx_1_device",
                                            "sx_2_ideal", "sx_2_device", "leakage"});
  CHECK(std::stod(rows[1][2]) > 0.999);
  CHECK(rows[1][3] == rows[1][4]);
}

TEST_CASE("write_result writes every file and the summary") {
  const auto dir = scratch_dir("write");
  const auto cfg = dqs::resolve_config(json::object(), {}, "table1");
  const auto res = dqs::run_table1(cfg);
  dqs::write_result(res, dir);
  CHECK(std::filesystem::exists(dir / "table1.csv"));
  CHECK(std::filesystem::exists(dir / "table1_summary.json"));
  CHECK(!std::filesystem::exists(dir / "table1.csv.tmp"));
  std::ifstream in(dir / "table1.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == res.files[0].contents);
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(dqs::format_number(0.0) == "0");
  CHECK(dqs::format_number(-0.0) == "0");
  CHECK(dqs::format_number(0.1) == "0.1");
  CHECK(dqs::format_number(1.0 / 3.0) == "0.333333333");
  CHECK(dqs::format_number(-2.5e-12) == "-2.5e-12");
  CHECK(dqs::format_number(123456789012.0) == "1.23456789e+11");
  CHECK(dqs::format_number(std::nan("")) == "nan");
  CHECK(dqs::format_number(-INFINITY) == "-inf");
}

TEST_CASE("config hash") {
  const json a = {{"x", 1}, {"y", {1, 2}}};
  const std::string h = dqs::config_hash(a);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(dqs::config_hash(a) == h);
  CHECK(dqs::config_hash({{"x", 2}, {"y", {1, 2}}}) != h);
  // Key order is canonical in the dump.
  CHECK(dqs::config_hash(json::parse(R"({"y": [1, 2], "x": 1})")) == h);
}

TEST_CASE("csv rendering and table checks") {
  dqs::Table t;
  t.columns = {"a", "b"};
  t.add_row({1.5, std::string("x")});
  CHECK(dqs::render_csv(t, {"hello"}) == "# hello\na,b\n1.5,x\n");
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  const json j = dqs::table_to_json(t, {{"k", 1}});
  CHECK(j["rows"][0][0] == 1.5);
  CHECK(j["rows"][0][1] == "x");
}

TEST_CASE("helpers") {
  CHECK(dqs::linspace(0.0, 1.0, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(dqs::linspace(0.3, 1.0, 1) == std::vector<double>{0.3});
  CHECK(dqs::linspace(0.0, 1.0, 0).empty());
  CHECK(dqs::default_spin_pattern(4) == "udud");
  CHECK(dqs::crossover_theta({0.0, 0.1, 0.2}, {0.0, 0.02, 0.05}, 0.03) == 0.2);
  CHECK(!dqs::crossover_theta({0.0, 0.1}, {0.0, 0.02}, 0.03).has_value());
  CHECK(dqs::parse_experiment("bounds") == dqs::Experiment::Bounds);
  CHECK_THROWS_AS(dqs::parse_experiment("fig4"), dqs::ConfigError);
}
