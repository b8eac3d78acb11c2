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

#include "dqsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "dqsim/output.hpp"

namespace dqs {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid configuration:";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Fig2Heisenberg: return "fig2-heisenberg";
    case Experiment::Fig2Tfim: return "fig2-tfim";
    case Experiment::Fig3: return "fig3";
    case Experiment::Table1: return "table1";
    case Experiment::Bounds: return "bounds";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& s) {
  for (auto e : {Experiment::Fig2Heisenberg, Experiment::Fig2Tfim, Experiment::Fig3, Experiment::Table1,
                 Experiment::Bounds}) {
    if (to_string(e) == s) return e;
  }
  throw ConfigError({"experiment: unknown experiment '" + s +
                     "' (expected fig2-heisenberg, fig2-tfim, fig3, table1 or bounds)"});
}

json default_config() {
  return {
      {"experiment", nullptr},
      {"model", {{"n", 3}, {"j_hz", 6.4e6}, {"b_hz", 6.4e6}, {"boundary", "open"}}},
      {"protocol",
       {{"theta_min", 0.0},
        {"theta_max", nullptr},
        {"theta_points", 64},
        {"thetas", json::array()},
        {"initial_state", nullptr},
        {"panels", nullptr}}},
      {"fig3", {{"initial_state", {{1.0, 0.0, 2.0, 0.0}, {0.0, 0.0, 1.0, 0.0}}}, {"leakage_warning", 0.1}}},
      {"device",
       {{"n_transmons", 2},
        {"levels", 3},
        {"omega1_hz", 5e9},
        {"alpha_r", -0.1},
        {"omega_r_hz", 7.5e9},
        {"g0_hz", 200e6},
        {"calibration", "spectral"}}},
      {"noise", {{"enabled", true}, {"kappa", 10e3}, {"gamma_phi", 20e3}, {"gamma_minus", 20e3}}},
      {"integrator",
       {{"dt_s", 2e-12}, {"fock_cutoff", 5}, {"max_steps", 20000000}, {"positivity_check_interval", 10000}}},
      {"gates",
       {{"tau_s", 10e-9},
        {"xy_rate_hz", 6.4e6},
        {"g_phi_hz", 10e6},
        {"two_qubit_error", 0.05},
        {"single_qubit_error", 0.01}}},
      {"table1", {{"n_list", {2, 3, 4, 5, 6}}, {"theta", kPi / 4.0}, {"steps", 1}}},
      {"bounds", {{"n_list", {3, 4}}, {"steps", {1, 2, 3, 4}}}},
      {"output", {{"dir", nullptr}, {"format", "csv"}, {"gnuplot", false}}},
  };
}

json parse_config_text(const std::string& text, const std::string& source) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto pos = what.find("parse error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw ConfigError({source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what});
  }
}

namespace {

// Overlays `user` onto `defaults`; object nodes recurse, anything else is a leaf.
json merge_onto(const json& defaults, const json& user, const std::string& path, std::vector<std::string>& errors) {
  if (!defaults.is_object()) return user;
  if (!user.is_object()) {
    errors.push_back((path.empty() ? std::string("<root>") : path) + ": expected an object");
    return defaults;
  }
  json out = defaults;
  for (const auto& [key, value] : user.items()) {
    const std::string sub = path.empty() ? key : path + "." + key;
    if (!defaults.contains(key)) {
      errors.push_back(sub + ": unknown key");
      continue;
    }
    out[key] = merge_onto(defaults[key], value, sub, errors);
  }
  return out;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

void apply_override(json& tree, const json& defaults, const std::string& item, std::vector<std::string>& errors) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    errors.push_back("--set " + item + ": expected key=value");
    return;
  }
  const std::string key = item.substr(0, eq);
  const std::string text = item.substr(eq + 1);
  const json* d = &defaults;
  json* t = &tree;
  const auto parts = split_path(key);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!d->is_object() || !d->contains(parts[k])) {
      errors.push_back(key + ": unknown key");
      return;
    }
    d = &(*d)[parts[k]];
    t = &(*t)[parts[k]];
  }
  if (d->is_object()) {
    errors.push_back(key + ": cannot override a whole section");
    return;
  }
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;  // bare strings need no quoting
  }
  *t = std::move(value);
}

// Typed access with key-path diagnostics.
class Reader {
 public:
  Reader(const json& root, std::vector<std::string>& errors) : root_(root), errors_(errors) {}

  const json* find(const std::string& path) const {
    const json* node = &root_;
    for (const auto& part : split_path(path)) {
      if (!node->is_object() || !node->contains(part)) return nullptr;
      node = &(*node)[part];
    }
    return node;
  }

  void fail(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

  double number(const std::string& path) {
    const json* n = find(path);
    if (!n || !n->is_number()) {
      fail(path, "expected a number");
      return kNaN;
    }
    const double v = n->get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
  }

  std::size_t count(const std::string& path) {
    const json* n = find(path);
    return to_count(n, path);
  }

  std::string text(const std::string& path) {
    const json* n = find(path);
    if (!n || !n->is_string()) {
      fail(path, "expected a string");
      return {};
    }
    return n->get<std::string>();
  }

  bool flag(const std::string& path) {
    const json* n = find(path);
    if (!n || !n->is_boolean()) {
      fail(path, "expected true or false");
      return false;
    }
    return n->get<bool>();
  }

  std::vector<double> numbers(const std::string& path) {
    const json* n = find(path);
    std::vector<double> out;
    if (!n || !n->is_array()) {
      fail(path, "expected an array of numbers");
      return out;
    }
    for (std::size_t k = 0; k < n->size(); ++k) {
      const auto& v = (*n)[k];
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        fail(path + "[" + std::to_string(k) + "]", "expected a finite number");
        continue;
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& path) {
    const json* n = find(path);
    std::vector<std::size_t> out;
    if (!n || !n->is_array()) {
      fail(path, "expected an array of non-negative integers");
      return out;
    }
    for (std::size_t k = 0; k < n->size(); ++k) out.push_back(to_count(&(*n)[k], path + "[" + std::to_string(k) + "]"));
    return out;
  }

  std::size_t to_count(const json* n, const std::string& path) {
    if (!n || !(n->is_number_unsigned() || (n->is_number_integer() && n->get<long long>() >= 0))) {
      fail(path, "expected a non-negative integer");
      return 0;
    }
    return n->get<std::size_t>();
  }

 private:
  const json& root_;
  std::vector<std::string>& errors_;
};

json default_panels(Experiment e) {
  if (e == Experiment::Fig2Tfim) {
    return {{{"name", "c"}, {"epsilon", 1e-2}, {"steps", {3, 5}}},
            {{"name", "d"}, {"epsilon", 5e-2}, {"steps", {2, 3}}}};
  }
  return {{{"name", "a"}, {"epsilon", 1e-2}, {"steps", {3, 5}}},
          {{"name", "b"}, {"epsilon", 5e-2}, {"steps", {2, 3}}}};
}

std::string default_out_dir() {
  if (const char* env = std::getenv("DQSIM_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "dqsim_out";
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (std::size_t k = 0; k < points; ++k) {
    out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  out.back() = hi;
  return out;
}

std::string default_spin_pattern(std::size_t n) {
  std::string s;
  for (std::size_t k = 0; k < n; ++k) s += (k % 2 == 0 ? 'u' : 'd');
  return s;
}

ExperimentConfig resolve_config(const json& user, const std::vector<std::string>& overrides,
                                const std::optional<std::string>& experiment) {
  std::vector<std::string> errors;
  const json defaults = default_config();
  json tree = merge_onto(defaults, user, "", errors);
  for (const auto& item : overrides) apply_override(tree, defaults, item, errors);

  if (experiment) {
    if (tree["experiment"].is_string() && tree["experiment"].get<std::string>() != *experiment) {
      errors.push_back("experiment: config file says '" + tree["experiment"].get<std::string>() +
                       "' but '" + *experiment + "' was requested");
    }
    tree["experiment"] = *experiment;
  }
  if (!errors.empty()) throw ConfigError(errors);

  ExperimentConfig cfg;
  if (tree["experiment"].is_null()) throw ConfigError({"experiment: missing required key"});
  if (!tree["experiment"].is_string()) throw ConfigError({"experiment: expected a string"});
  cfg.experiment = parse_experiment(tree["experiment"].get<std::string>());

  // Experiment-dependent defaults.
  const bool fig2 = cfg.experiment == Experiment::Fig2Heisenberg || cfg.experiment == Experiment::Fig2Tfim;
  if (tree["protocol"]["theta_max"].is_null()) {
    tree["protocol"]["theta_max"] = cfg.experiment == Experiment::Fig3 ? kPi / 2.0 : kPi / 4.0;
  }
  if (tree["protocol"]["panels"].is_null()) tree["protocol"]["panels"] = fig2 ? default_panels(cfg.experiment) : json::array();
  if (tree["output"]["dir"].is_null()) tree["output"]["dir"] = default_out_dir();

  Reader r(tree, errors);

  // model
  cfg.n = r.count("model.n");
  if (cfg.n < 2 || cfg.n > 6) r.fail("model.n", "must lie in [2, 6]");
  const double j_hz = r.number("model.j_hz");
  if (!(j_hz > 0.0)) r.fail("model.j_hz", "must be > 0");
  cfg.j = angular(j_hz);
  cfg.b = angular(r.number("model.b_hz"));
  try {
    cfg.boundary = parse_boundary(r.text("model.boundary"));
  } catch (const std::exception&) {
    r.fail("model.boundary", "expected 'open' or 'periodic'");
  }
  if (cfg.boundary == Boundary::Periodic && cfg.n < 3) r.fail("model.boundary", "periodic chains need model.n >= 3");

  // protocol
  const double tmin = r.number("protocol.theta_min");
  const double tmax = r.number("protocol.theta_max");
  const std::size_t points = r.count("protocol.theta_points");
  if (tmin < 0.0) r.fail("protocol.theta_min", "must be >= 0");
  if (tmax > kPi) r.fail("protocol.theta_max", "must be <= pi");
  if (tmin > tmax) r.fail("protocol.theta_max", "must be >= protocol.theta_min");
  if (points < 1) r.fail("protocol.theta_points", "must be >= 1");
  cfg.thetas = r.numbers("protocol.thetas");
  if (cfg.thetas.empty() && errors.empty()) cfg.thetas = linspace(tmin, tmax, points);
  for (std::size_t k = 0; k < cfg.thetas.size(); ++k) {
    if (cfg.thetas[k] < 0.0 || cfg.thetas[k] > kPi) r.fail("protocol.thetas[" + std::to_string(k) + "]", "must lie in [0, pi]");
    if (k > 0 && cfg.thetas[k] < cfg.thetas[k - 1]) r.fail("protocol.thetas", "must be sorted ascending");
  }

  const json& init = tree["protocol"]["initial_state"];
  if (init.is_null()) {
    cfg.initial_state = default_spin_pattern(cfg.n);
    tree["protocol"]["initial_state"] = cfg.initial_state;
  } else {
    cfg.initial_state = r.text("protocol.initial_state");
    if (cfg.initial_state.size() != cfg.n ||
        cfg.initial_state.find_first_not_of("ud") != std::string::npos) {
      r.fail("protocol.initial_state", "expected " + std::to_string(cfg.n) + " characters from {u, d}");
    }
  }

  const json& panels = tree["protocol"]["panels"];
  if (!panels.is_array()) {
    r.fail("protocol.panels", "expected an array");
  } else {
    for (std::size_t k = 0; k < panels.size(); ++k) {
      const std::string base = "protocol.panels[" + std::to_string(k) + "]";
      const json& p = panels[k];
      if (!p.is_object()) {
        r.fail(base, "expected an object");
        continue;
      }
      for (const auto& [key, _] : p.items()) {
        if (key != "name" && key != "epsilon" && key != "steps") r.fail(base + "." + key, "unknown key");
      }
      Fig2Panel panel;
      if (!p.contains("name") || !p["name"].is_string() || p["name"].get<std::string>().empty() ||
          p["name"].get<std::string>().find_first_of("/\\. ") != std::string::npos) {
        r.fail(base + ".name", "expected a non-empty name without '/', '\\', '.' or spaces");
      } else {
        panel.name = p["name"].get<std::string>();
      }
      if (!p.contains("epsilon") || !p["epsilon"].is_number() || !(p["epsilon"].get<double>() >= 0.0) ||
          !(p["epsilon"].get<double>() < 1.0)) {
        r.fail(base + ".epsilon", "must lie in [0, 1)");
      } else {
        panel.epsilon = p["epsilon"].get<double>();
      }
      if (!p.contains("steps") || !p["steps"].is_array() || p["steps"].empty()) {
        r.fail(base + ".steps", "expected a non-empty array of positive integers");
      } else {
        for (std::size_t s = 0; s < p["steps"].size(); ++s) {
          const std::string sp = base + ".steps[" + std::to_string(s) + "]";
          const std::size_t l = r.to_count(&p["steps"][s], sp);
          if (l < 1) r.fail(sp, "must be >= 1");
          panel.steps.push_back(l);
        }
      }
      cfg.panels.push_back(std::move(panel));
    }
    if (fig2 && panels.empty()) r.fail("protocol.panels", "fig2 experiments need at least one panel");
  }

  // fig3
  const json& amps = tree["fig3"]["initial_state"];
  if (!amps.is_array() || amps.size() != 2) {
    r.fail("fig3.initial_state", "expected two qubits, each [up_re, up_im, down_re, down_im]");
  } else {
    for (std::size_t q = 0; q < 2; ++q) {
      const std::string base = "fig3.initial_state[" + std::to_string(q) + "]";
      const json& a = amps[q];
      bool ok = a.is_array() && a.size() == 4;
      for (std::size_t k = 0; ok && k < 4; ++k) ok = a[k].is_number() && std::isfinite(a[k].get<double>());
      if (!ok) {
        r.fail(base, "expected [up_re, up_im, down_re, down_im]");
        continue;
      }
      const cplx up(a[0].get<double>(), a[1].get<double>());
      const cplx down(a[2].get<double>(), a[3].get<double>());
      if (std::abs(up) == 0.0 && std::abs(down) == 0.0) r.fail(base, "amplitudes must not all vanish");
      cfg.fig3_initial.emplace_back(up, down);
    }
  }
  cfg.leakage_warning = r.number("fig3.leakage_warning");
  if (!(cfg.leakage_warning > 0.0 && cfg.leakage_warning <= 1.0)) r.fail("fig3.leakage_warning", "must lie in (0, 1]");

  // device
  cfg.device.n_transmons = r.count("device.n_transmons");
  if (cfg.device.n_transmons != 2) r.fail("device.n_transmons", "device runs support exactly two transmons");
  cfg.device.levels_per_transmon = r.count("device.levels");
  if (cfg.device.levels_per_transmon < 2) r.fail("device.levels", "must be >= 2");
  const double w1 = r.number("device.omega1_hz");
  const double wr = r.number("device.omega_r_hz");
  const double g0 = r.number("device.g0_hz");
  if (!(w1 > 0.0)) r.fail("device.omega1_hz", "must be > 0");
  if (!(wr > 0.0)) r.fail("device.omega_r_hz", "must be > 0");
  if (!(g0 > 0.0)) r.fail("device.g0_hz", "must be > 0");
  cfg.device.omega1 = angular(w1);
  cfg.device.omega_r = angular(wr);
  cfg.device.g0 = angular(g0);
  cfg.device.alpha_r = r.number("device.alpha_r");
  try {
    cfg.calibration = parse_calibration(r.text("device.calibration"));
  } catch (const std::exception&) {
    r.fail("device.calibration", "expected 'spectral' or 'dispersive-formula'");
  }

  // noise
  const bool noise_on = r.flag("noise.enabled");
  const double kappa = r.number("noise.kappa");
  const double gphi = r.number("noise.gamma_phi");
  const double gminus = r.number("noise.gamma_minus");
  if (kappa < 0.0) r.fail("noise.kappa", "must be >= 0");
  if (gphi < 0.0) r.fail("noise.gamma_phi", "must be >= 0");
  if (gminus < 0.0) r.fail("noise.gamma_minus", "must be >= 0");
  cfg.noise = noise_on ? NoiseParams{angular(kappa), angular(gphi), angular(gminus)} : NoiseParams::none();

  // integrator
  cfg.integrator.dt = r.number("integrator.dt_s");
  if (!(cfg.integrator.dt > 0.0)) r.fail("integrator.dt_s", "must be > 0");
  cfg.device.fock_cutoff = r.count("integrator.fock_cutoff");
  if (cfg.device.fock_cutoff < 2) r.fail("integrator.fock_cutoff", "must be >= 2");
  cfg.integrator.max_steps = r.count("integrator.max_steps");
  if (cfg.integrator.max_steps < 1) r.fail("integrator.max_steps", "must be >= 1");
  cfg.integrator.positivity_check_interval = r.count("integrator.positivity_check_interval");

  // gates
  cfg.gate_times.tau_s = r.number("gates.tau_s");
  cfg.gate_times.xy_rate = angular(r.number("gates.xy_rate_hz"));
  cfg.gate_times.g_phi = angular(r.number("gates.g_phi_hz"));
  if (!(cfg.gate_times.tau_s > 0.0)) r.fail("gates.tau_s", "must be > 0");
  if (!(cfg.gate_times.xy_rate > 0.0)) r.fail("gates.xy_rate_hz", "must be > 0");
  if (!(cfg.gate_times.g_phi > 0.0)) r.fail("gates.g_phi_hz", "must be > 0");
  cfg.gate_errors.two_qubit_error = r.number("gates.two_qubit_error");
  cfg.gate_errors.single_qubit_error = r.number("gates.single_qubit_error");
  if (!(cfg.gate_errors.two_qubit_error >= 0.0 && cfg.gate_errors.two_qubit_error < 1.0)) {
    r.fail("gates.two_qubit_error", "must lie in [0, 1)");
  }
  if (!(cfg.gate_errors.single_qubit_error >= 0.0 && cfg.gate_errors.single_qubit_error < 1.0)) {
    r.fail("gates.single_qubit_error", "must lie in [0, 1)");
  }

  // table1
  cfg.table_n = r.counts("table1.n_list");
  if (cfg.table_n.empty()) r.fail("table1.n_list", "must not be empty");
  for (std::size_t k = 0; k < cfg.table_n.size(); ++k) {
    if (cfg.table_n[k] < 2 || cfg.table_n[k] > 64) r.fail("table1.n_list[" + std::to_string(k) + "]", "must lie in [2, 64]");
  }
  cfg.table_theta = r.number("table1.theta");
  if (!(cfg.table_theta >= 0.0 && cfg.table_theta <= kPi)) r.fail("table1.theta", "must lie in [0, pi]");
  cfg.table_steps = r.count("table1.steps");
  if (cfg.table_steps < 1) r.fail("table1.steps", "must be >= 1");

  // bounds
  cfg.bounds_n = r.counts("bounds.n_list");
  if (cfg.bounds_n.empty()) r.fail("bounds.n_list", "must not be empty");
  for (std::size_t k = 0; k < cfg.bounds_n.size(); ++k) {
    if (cfg.bounds_n[k] < 2 || cfg.bounds_n[k] > 6) r.fail("bounds.n_list[" + std::to_string(k) + "]", "must lie in [2, 6]");
  }
  cfg.bounds_steps = r.counts("bounds.steps");
  if (cfg.bounds_steps.empty()) r.fail("bounds.steps", "must not be empty");
  for (std::size_t k = 0; k < cfg.bounds_steps.size(); ++k) {
    if (cfg.bounds_steps[k] < 1) r.fail("bounds.steps[" + std::to_string(k) + "]", "must be >= 1");
  }

  // output
  cfg.out_dir = r.text("output.dir");
  if (cfg.out_dir.empty()) r.fail("output.dir", "must not be empty");
  cfg.format = r.text("output.format");
  if (cfg.format != "csv" && cfg.format != "json") r.fail("output.format", "expected 'csv' or 'json'");
  cfg.gnuplot = r.flag("output.gnuplot");

  if (!errors.empty()) throw ConfigError(errors);

  cfg.resolved = tree;
  cfg.resolved.erase("output");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                             const std::optional<std::string>& experiment) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open config file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return resolve_config(parse_config_text(ss.str(), path.string()), overrides, experiment);
}

std::optional<double> crossover_theta(const std::vector<double>& thetas, const std::vector<double>& loss,
                                      double line) {
  if (thetas.size() != loss.size()) throw std::invalid_argument("crossover_theta: length mismatch");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (loss[i] > line) return thetas[i];
  }
  return std::nullopt;
}

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Adds `table` to `result` in the configured format, with the metadata header.
void emit_table(ExperimentResult& result, const ExperimentConfig& cfg, const std::string& base, const Table& table,
                const json& extra, const std::vector<std::string>& plot_columns, const std::string& title) {
  const std::string hash = config_hash(cfg.resolved);
  if (cfg.format == "json") {
    json meta = {{"experiment", to_string(cfg.experiment)}, {"title", title}, {"config_hash", hash},
                 {"config", cfg.resolved}};
    for (const auto& [k, v] : extra.items()) meta[k] = v;
    result.files.push_back({base + ".json", table_to_json(table, meta).dump(2) + "\n"});
  } else {
    std::vector<std::string> header = {"dqsim " + to_string(cfg.experiment) + ": " + title, "config_hash " + hash,
                                       "config " + cfg.resolved.dump()};
    for (const auto& [k, v] : extra.items()) header.push_back(k + " " + (v.is_string() ? v.get<std::string>() : v.dump()));
    result.files.push_back({base + ".csv", render_csv(table, header)});
    if (cfg.gnuplot && !plot_columns.empty()) {
      result.files.push_back({base + ".gp", gnuplot_script(base + ".csv", table, plot_columns, title)});
    }
  }
}

ProtocolFamily spin_family(bool heisenberg_model, std::size_t n, Boundary boundary, const ExperimentConfig& cfg) {
  if (heisenberg_model) {
    if (n == 2) return heisenberg_pair_family(cfg.gate_times);
    return heisenberg_chain_family(n, boundary, cfg.gate_times);
  }
  return tfim_family(n, cfg.b / cfg.j, boundary, cfg.gate_times);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ExperimentResult run_fig2(const ExperimentConfig& cfg, std::size_t threads) {
  const bool heis = cfg.experiment == Experiment::Fig2Heisenberg;
  if (!heis && cfg.experiment != Experiment::Fig2Tfim) throw std::invalid_argument("run_fig2: not a fig2 experiment");

  const ProtocolFamily family = spin_family(heis, cfg.n, cfg.boundary, cfg);
  const QuantumState init = spin_product_state(cfg.initial_state);

  ExperimentResult result;
  result.summary = {{"experiment", to_string(cfg.experiment)},
                    {"config_hash", config_hash(cfg.resolved)},
                    {"model", family.name},
                    {"n", cfg.n},
                    {"boundary", to_string(cfg.boundary)},
                    {"initial_state", cfg.initial_state},
                    {"panels", json::array()}};
  std::ostringstream report;
  report << to_string(cfg.experiment) << ": " << family.name << ", n = " << cfg.n << ", "
         << to_string(cfg.boundary) << ", initial state " << cfg.initial_state << "\n";

  for (const auto& panel : cfg.panels) {
    const DigitalErrorTable curve = digital_error_curve(family, cfg.thetas, panel.steps, init, threads);

    Table table;
    table.columns = {"theta"};
    std::vector<std::string> plot;
    for (std::size_t l : panel.steps) {
      table.columns.push_back("loss_l" + std::to_string(l));
      plot.push_back(table.columns.back());
    }
    for (std::size_t l : panel.steps) {
      table.columns.push_back("gate_error_l" + std::to_string(l));
      plot.push_back(table.columns.back());
    }
    for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
      std::vector<Cell> row = {cfg.thetas[i]};
      for (std::size_t k = 0; k < panel.steps.size(); ++k) row.emplace_back(curve.loss[k][i]);
      for (std::size_t l : panel.steps) row.emplace_back(accumulated_gate_error(panel.epsilon, l));
      table.add_row(std::move(row));
    }

    json curves = json::array();
    report << "  panel " << panel.name << " (epsilon = " << format_number(panel.epsilon) << ")\n";
    for (std::size_t k = 0; k < panel.steps.size(); ++k) {
      const std::size_t l = panel.steps[k];
      const double line = accumulated_gate_error(panel.epsilon, l);
      const auto cross = crossover_theta(cfg.thetas, curve.loss[k], line);
      const double max_loss = curve.loss[k].empty() ? 0.0 : *std::max_element(curve.loss[k].begin(), curve.loss[k].end());
      curves.push_back({{"steps", l}, {"gate_error", line}, {"crossover_theta", optional_json(cross)}, {"max_loss", max_loss}});
      report << "    l = " << l << ": gate error " << format_number(line) << ", max digital loss "
             << format_number(max_loss) << ", digital error dominates from theta = "
             << (cross ? format_number(*cross) : std::string("(never on this grid)")) << "\n";
    }
    result.summary["panels"].push_back({{"name", panel.name}, {"epsilon", panel.epsilon}, {"curves", curves}});

    const json extra = {{"panel", panel.name},
                        {"epsilon", panel.epsilon},
                        {"initial_state", cfg.initial_state},
                        {"loss", "1 - |<psi_exact|psi_digital>|^2"}};
    emit_table(result, cfg, to_string(cfg.experiment) + "_" + panel.name, table, extra, plot,
               family.name + " panel " + panel.name);
  }
  result.report = report.str();
  return result;
}

ExperimentResult run_fig3(const ExperimentConfig& cfg, std::size_t threads) {
  const DeviceModel device(cfg.device, cfg.noise, cfg.calibration);
  DeviceRunOptions options;
  options.integrator = cfg.integrator;
  options.threads = threads;
  options.leakage_warning = cfg.leakage_warning;
  const ProtocolFamily family = heisenberg_pair_family(cfg.gate_times);
  const Trajectory traj = run_sequence_on_device(family, device, qubit_product_state(cfg.fig3_initial), cfg.thetas, options);

  ExperimentResult result;
  const Table table = trajectory_table(traj);
  const json extra = {{"calibration", traj.metadata["calibration"]},
                      {"reference_sign", traj.metadata["reference_sign"]},
                      {"integrator", traj.metadata["integrator"]},
                      {"warnings", traj.metadata["warnings"]}};
  emit_table(result, cfg, "fig3", table, extra,
             {"fidelity", "sx_1_ideal", "sx_1_device", "sx_2_ideal", "sx_2_device"}, "two-transmon Heisenberg");

  double min_f = 1.0, mean_f = 0.0, max_leak = 0.0;
  for (const auto& s : traj.samples) {
    min_f = std::min(min_f, s.fidelity);
    mean_f += s.fidelity;
    max_leak = std::max(max_leak, s.leakage);
  }
  if (!traj.samples.empty()) mean_f /= static_cast<double>(traj.samples.size());
  result.summary = {{"experiment", "fig3"},
                    {"config_hash", config_hash(cfg.resolved)},
                    {"samples", traj.samples.size()},
                    {"min_fidelity", min_f},
                    {"mean_fidelity", mean_f},
                    {"max_leakage", max_leak},
                    {"metadata", traj.metadata}};
  std::ostringstream report;
  report << "fig3: " << traj.samples.size() << " samples, min fidelity " << format_number(min_f)
         << ", mean fidelity " << format_number(mean_f) << ", max leakage " << format_number(max_leak) << "\n"
         << "  effective XY coefficient " << fmt("%.6g", device.calibration().xy_coefficient / kTwoPi / 1e6)
         << " MHz (" << to_string(device.calibration().mode) << "), dispersive formula "
         << fmt("%.6g", device.calibration().formula_rate / kTwoPi / 1e6) << " MHz\n";
  for (const auto& w : traj.metadata["warnings"]) report << "  warning: " << w.get<std::string>() << "\n";
  result.report = report.str();
  return result;
}

namespace {

struct Table1Spec {
  const char* label;
  ModelKind model;
  Boundary boundary;
};

constexpr Table1Spec kTable1Rows[] = {
    {"H_o", ModelKind::Heisenberg, Boundary::Open},
    {"H_p", ModelKind::Heisenberg, Boundary::Periodic},
    {"I_o", ModelKind::Ising, Boundary::Open},
    {"I_p", ModelKind::Ising, Boundary::Periodic},
};

// One Trotterized sequence for a Table 1 row; the pair protocol is exact, so l
// steps of it are l copies at theta / l.
GateSequence table1_sequence(const Table1Spec& spec, std::size_t n, double theta, std::size_t l,
                             const ExperimentConfig& cfg) {
  if (spec.model == ModelKind::Ising) {
    return compile_tfim(n, theta, cfg.b / cfg.j * theta, l, spec.boundary, cfg.gate_times);
  }
  if (n >= 3) return compile_heisenberg_chain(n, theta, l, spec.boundary, cfg.gate_times);
  GateSequence seq = compile_heisenberg_pair(theta / static_cast<double>(l), cfg.gate_times);
  const auto one = seq.gates;
  for (std::size_t k = 1; k < l; ++k) seq.gates.insert(seq.gates.end(), one.begin(), one.end());
  seq.trotter_steps = l;
  seq.metadata.theta = theta;
  return seq;
}

struct CrossCheck {
  const char* label;
  std::size_t n;
  double reference_s;
};

constexpr CrossCheck kCrossChecks[] = {{"H_o", 2, 0.10e-6}, {"H_o", 3, 0.16e-6}, {"I_p", 3, 190e-9}};

}  // namespace

ExperimentResult run_table1(const ExperimentConfig& cfg) {
  Table table;
  table.columns = {"model",        "n",          "theta", "steps", "time_formula_s", "time_gate_sum_s", "error_bound",
                   "two_qubit_gates", "single_qubit_gates", "fidelity_estimate"};
  json rows_json = json::array();
  std::ostringstream report;
  report << "table1: theta = " << format_number(cfg.table_theta) << ", l = " << cfg.table_steps << "\n"
         << "  model  n   time (formula)   time (gate sum)   error bound\n";

  for (const auto& spec : kTable1Rows) {
    for (std::size_t n : cfg.table_n) {
      if (spec.boundary == Boundary::Periodic && n < 3) continue;
      const GateSequence seq = table1_sequence(spec, n, cfg.table_theta, cfg.table_steps, cfg);
      const double t_formula = execution_time(spec.model, n, spec.boundary, cfg.table_theta, cfg.table_steps, cfg.gate_times);
      const double t_sum = execution_time(seq);
      const double bound = trotter_error_bound(spec.model, n, spec.boundary, cfg.table_theta, cfg.table_steps);
      const FidelityEstimate est = sequence_fidelity_estimate(seq, cfg.gate_errors);
      table.add_row({std::string(spec.label), static_cast<double>(n), cfg.table_theta,
                     static_cast<double>(cfg.table_steps), t_formula, t_sum, bound,
                     static_cast<double>(est.two_qubit_gates), static_cast<double>(est.single_qubit_gates),
                     est.fidelity});
      char line[160];
      std::snprintf(line, sizeof line, "  %-5s %2zu   %10.4g s    %10.4g s      %.4g\n", spec.label, n, t_formula,
                    t_sum, bound);
      report << line;
    }
  }

  json checks = json::array();
  for (const auto& c : kCrossChecks) {
    if (std::find(cfg.table_n.begin(), cfg.table_n.end(), c.n) == cfg.table_n.end()) continue;
    const Table1Spec* spec = nullptr;
    for (const auto& s : kTable1Rows) {
      if (std::string(s.label) == c.label) spec = &s;
    }
    const double t = execution_time(table1_sequence(*spec, c.n, cfg.table_theta, cfg.table_steps, cfg));
    const double rel = (t - c.reference_s) / c.reference_s;
    const bool ok = std::abs(rel) <= 0.2;
    checks.push_back({{"model", c.label},
                      {"n", c.n},
                      {"time_s", t},
                      {"reference_s", c.reference_s},
                      {"relative_deviation", rel},
                      {"within_20_percent", ok}});
    report << "  check " << c.label << " n=" << c.n << ": " << fmt("%.4g", t * 1e9) << " ns vs "
           << fmt("%.4g", c.reference_s * 1e9) << " ns (" << fmt("%+.1f", rel * 100.0) << "%) "
           << (ok ? "ok" : "OFF") << "\n";
  }

  ExperimentResult result;
  const json extra = {{"gate_times",
                       {{"tau_s", cfg.gate_times.tau_s},
                        {"xy_rate_hz", cfg.gate_times.xy_rate / kTwoPi},
                        {"g_phi_hz", cfg.gate_times.g_phi / kTwoPi}}},
                      {"convention", "J = 2 * xy_rate; time_formula_s is the closed form, time_gate_sum_s sums gate durations"}};
  emit_table(result, cfg, "table1", table, extra, {}, "execution times and error bounds");
  result.summary = {{"experiment", "table1"}, {"config_hash", config_hash(cfg.resolved)}, {"cross_checks", checks}};
  result.report = report.str();
  return result;
}

ExperimentResult run_bounds(const ExperimentConfig& cfg, std::size_t threads) {
  Table table;
  table.columns = {"model", "boundary", "n", "steps", "theta", "loss", "bound", "within_bound"};
  std::size_t cells = 0, violations = 0;
  double worst_ratio = 0.0;
  std::ostringstream report;
  report << "bounds: digital fidelity loss against the Trotter error bounds\n";

  for (bool heis : {true, false}) {
    const ModelKind model = heis ? ModelKind::Heisenberg : ModelKind::Ising;
    for (Boundary boundary : {Boundary::Open, Boundary::Periodic}) {
      for (std::size_t n : cfg.bounds_n) {
        if (boundary == Boundary::Periodic && n < 3) continue;
        const ProtocolFamily family = spin_family(heis, n, boundary, cfg);
        const DigitalErrorTable curve =
            digital_error_curve(family, cfg.thetas, cfg.bounds_steps, spin_product_state(default_spin_pattern(n)), threads);
        std::size_t local_viol = 0;
        for (std::size_t k = 0; k < cfg.bounds_steps.size(); ++k) {
          for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
            const double loss = curve.loss[k][i];
            const double bound = trotter_error_bound(model, n, boundary, cfg.thetas[i], cfg.bounds_steps[k]);
            const bool within = loss <= bound + 1e-12;
            ++cells;
            if (!within) {
              ++violations;
              ++local_viol;
            }
            if (bound > 0.0) worst_ratio = std::max(worst_ratio, loss / bound);
            table.add_row({std::string(heis ? "heisenberg" : "tfim"), to_string(boundary), static_cast<double>(n),
                           static_cast<double>(cfg.bounds_steps[k]), cfg.thetas[i], loss, bound,
                           within ? 1.0 : 0.0});
          }
        }
        report << "  " << (heis ? "heisenberg" : "tfim") << " " << to_string(boundary) << " n=" << n << ": "
               << (local_viol == 0 ? "all within bound" : std::to_string(local_viol) + " points above bound") << "\n";
      }
    }
  }

  ExperimentResult result;
  emit_table(result, cfg, "bounds", table, {{"initial_state", "alternating u/d per n"}}, {}, "loss vs Trotter bound");
  result.summary = {{"experiment", "bounds"},
                    {"config_hash", config_hash(cfg.resolved)},
                    {"cells", cells},
                    {"violations", violations},
                    {"max_loss_over_bound", worst_ratio}};
  report << "  " << cells << " cells, " << violations << " violations, max loss/bound " << format_number(worst_ratio)
         << "\n";
  result.report = report.str();
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
  switch (cfg.experiment) {
    case Experiment::Fig2Heisenberg:
    case Experiment::Fig2Tfim: return run_fig2(cfg, threads);
    case Experiment::Fig3: return run_fig3(cfg, threads);
    case Experiment::Table1: return run_table1(cfg);
    case Experiment::Bounds: return run_bounds(cfg, threads);
  }
  throw std::invalid_argument("unknown experiment");
}

void write_result(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& f : result.files) write_text_file(dir / f.name, f.contents);
  const std::string tag = result.summary.value("experiment", std::string("experiment"));
  write_text_file(dir / (tag + "_summary.json"), result.summary.dump(2) + "\n");
}

}  // namespace dqs
