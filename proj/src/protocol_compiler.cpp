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

#include "dqsim/protocol_compiler.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dqs {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::size_t> all_sites(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

void require_steps(std::size_t l) {
  if (l < 1) throw std::invalid_argument("Trotter step count l must be >= 1");
}

// Body of one Heisenberg Trotter step.
void append_heisenberg_step(GateSequence& seq,
                            const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                            double phase, const GateTimes& times) {
  const auto sites = all_sites(seq.n_sites);
  const double xy_time = std::abs(phase) / times.xy_rate;
  auto xy_layer = [&] {
    for (const auto& [i, j] : pairs) seq.gates.push_back(Gate::xy(i, j, phase, xy_time));
  };
  xy_layer();
  seq.gates.push_back(Gate::rotation(Axis::X, kPi / 4, sites, times.tau_s));
  xy_layer();
  seq.gates.push_back(Gate::rotation(Axis::X, -kPi / 4, sites, times.tau_s));
  seq.gates.push_back(Gate::rotation(Axis::Y, kPi / 4, sites, times.tau_s));
  xy_layer();
  seq.gates.push_back(Gate::rotation(Axis::Y, -kPi / 4, sites, times.tau_s));
}

void append_ising_pairs(GateSequence& seq,
                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                        double phase, const GateTimes& times) {
  const double xy_time = std::abs(phase) / times.xy_rate;
  for (const auto& [i, j] : pairs) {
    seq.gates.push_back(Gate::xy(i, j, phase, xy_time));
    seq.gates.push_back(Gate::rotation(Axis::X, kPi / 2, {i}, times.tau_s));
    seq.gates.push_back(Gate::xy(i, j, phase, xy_time));
    seq.gates.push_back(Gate::rotation(Axis::X, -kPi / 2, {i}, times.tau_s));
  }
}

}  // namespace

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::XyEvolution: return "xy_evolution";
    case GateKind::Rotation: return "rotation";
    case GateKind::IdealField: return "ideal_field";
  }
  return "unknown";
}

Gate Gate::xy(std::size_t i, std::size_t j, double phase, double duration) {
  Gate g;
  g.kind = GateKind::XyEvolution;
  g.targets = {i, j};
  g.phase = phase;
  g.duration = duration;
  return g;
}

Gate Gate::rotation(Axis axis, double angle, std::vector<std::size_t> targets, double duration) {
  Gate g;
  g.kind = GateKind::Rotation;
  g.axis = axis;
  g.angle = angle;
  g.targets = std::move(targets);
  g.duration = duration;
  return g;
}

Gate Gate::field(Axis axis, double phase, std::vector<std::size_t> targets, double duration) {
  Gate g;
  g.kind = GateKind::IdealField;
  g.axis = axis;
  g.phase = phase;
  g.targets = std::move(targets);
  g.duration = duration;
  return g;
}

void GateSequence::validate() const {
  if (trotter_steps < 1) throw std::invalid_argument("GateSequence: trotter_steps must be >= 1");
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Gate& g = gates[k];
    const std::string where = "gate " + std::to_string(k) + ": ";
    if (g.targets.empty()) throw std::invalid_argument(where + "no targets");
    for (std::size_t t : g.targets) {
      if (t >= n_sites) throw std::invalid_argument(where + "target " + std::to_string(t) + " out of range");
    }
    if (!std::isfinite(g.phase) || !std::isfinite(g.duration)) {
      throw std::invalid_argument(where + "non-finite phase or duration");
    }
    switch (g.kind) {
      case GateKind::XyEvolution:
        if (g.targets.size() != 2 || g.targets[0] == g.targets[1]) {
          throw std::invalid_argument(where + "xy_evolution needs two distinct sites");
        }
        break;
      case GateKind::Rotation:
        if (!(g.angle > -kPi && g.angle <= kPi)) {
          throw std::invalid_argument(where + "rotation angle outside (-pi, pi]");
        }
        break;
      case GateKind::IdealField:
        break;
    }
  }
}

void GateErrorModel::validate() const {
  auto ok = [](double p) { return p >= 0.0 && p < 1.0; };
  if (!ok(two_qubit_error) || !ok(single_qubit_error)) {
    throw std::invalid_argument("gate error probabilities must lie in [0, 1)");
  }
}

void GateTimes::validate() const {
  if (!(tau_s > 0.0) || !(xy_rate > 0.0) || !(g_phi > 0.0)) {
    throw std::invalid_argument("gate times and rates must be positive");
  }
}

std::string to_string(ModelKind m) { return m == ModelKind::Heisenberg ? "heisenberg" : "ising"; }

ModelKind parse_model(const std::string& s) {
  if (s == "heisenberg") return ModelKind::Heisenberg;
  if (s == "ising") return ModelKind::Ising;
  throw std::invalid_argument("unknown model tag '" + s + "' (expected heisenberg|ising)");
}

GateSequence compile_heisenberg_pair(double theta, const GateTimes& times) {
  times.validate();
  GateSequence seq;
  seq.n_sites = 2;
  seq.trotter_steps = 1;
  seq.metadata = {"heisenberg", Boundary::Open, theta, 0.0};
  append_heisenberg_step(seq, {{0, 1}}, theta, times);
  return seq;
}

GateSequence compile_heisenberg_chain(std::size_t n, double theta, std::size_t l, Boundary boundary,
                                      const GateTimes& times, const std::vector<double>& step_phases) {
  if (n < 3) throw std::invalid_argument("compile_heisenberg_chain needs n >= 3");
  require_steps(l);
  times.validate();
  if (!step_phases.empty() && step_phases.size() != l) {
    throw std::invalid_argument("step_phases must have one entry per Trotter step");
  }
  GateSequence seq;
  seq.n_sites = n;
  seq.trotter_steps = l;
  seq.metadata = {"heisenberg", boundary, theta, 0.0};
  const auto pairs = bonds(n, boundary);
  for (std::size_t s = 0; s < l; ++s) {
    const double phase = step_phases.empty() ? theta / static_cast<double>(l) : step_phases[s];
    append_heisenberg_step(seq, pairs, phase, times);
  }
  return seq;
}

GateSequence compile_ising_frustrated(double theta, const GateTimes& times) {
  times.validate();
  GateSequence seq;
  seq.n_sites = 3;
  seq.trotter_steps = 1;
  seq.metadata = {"ising", Boundary::Periodic, theta, 0.0};
  append_ising_pairs(seq, bonds(3, Boundary::Periodic), theta, times);
  return seq;
}

GateSequence compile_tfim(std::size_t n, double theta_j, double theta_b, std::size_t l,
                          Boundary boundary, const GateTimes& times) {
  if (n < 2) throw std::invalid_argument("compile_tfim needs n >= 2");
  require_steps(l);
  times.validate();
  GateSequence seq;
  seq.n_sites = n;
  seq.trotter_steps = l;
  seq.metadata = {"tfim", boundary, theta_j, theta_b};
  const auto pairs = bonds(n, boundary);
  const double lf = static_cast<double>(l);
  for (std::size_t s = 0; s < l; ++s) {
    append_ising_pairs(seq, pairs, theta_j / lf, times);
    if (theta_b != 0.0) {
      seq.gates.push_back(Gate::field(Axis::Y, theta_b / lf, all_sites(n), std::abs(theta_b / lf) / times.g_phi));
    }
  }
  return seq;
}

GateSequence with_adjoint_rotations(const GateSequence& seq) {
  GateSequence out = seq;
  for (auto& g : out.gates) {
    // exp(-i pi s) = -1: a rotation by pi is its own inverse up to a global phase.
    if (g.kind == GateKind::Rotation && g.angle != kPi) g.angle = -g.angle;
  }
  return out;
}

double trotter_error_bound(ModelKind model, std::size_t n, Boundary boundary, double jt, std::size_t l) {
  if (n < 2) throw std::invalid_argument("trotter_error_bound needs n >= 2");
  require_steps(l);
  const double nn = static_cast<double>(n);
  const double scale = jt * jt / static_cast<double>(l);
  switch (model) {
    case ModelKind::Heisenberg:
      return (boundary == Boundary::Open ? 24.0 * (nn - 2.0) : 24.0 * nn) * scale;
    case ModelKind::Ising:
      return (boundary == Boundary::Open ? 2.0 * (nn - 1.0) : 2.0 * nn) * scale;
  }
  throw std::invalid_argument("unknown model");
}

double execution_time(ModelKind model, std::size_t n, Boundary boundary, double theta, std::size_t l,
                      const GateTimes& times) {
  if (n < 2) throw std::invalid_argument("execution_time needs n >= 2");
  times.validate();
  const double j = 2.0 * times.xy_rate;
  const double lf = static_cast<double>(l);
  const double bondsf = boundary == Boundary::Open ? static_cast<double>(n - 1) : static_cast<double>(n);
  const double th = std::abs(theta);
  switch (model) {
    case ModelKind::Heisenberg:
      return 4.0 * lf * times.tau_s + 6.0 * bondsf * th / j;
    case ModelKind::Ising:
      return 2.0 * bondsf * lf * times.tau_s + th / times.g_phi + 4.0 * bondsf * th / j;
  }
  throw std::invalid_argument("unknown model");
}

double execution_time(const GateSequence& seq) {
  double t = 0.0;
  for (const auto& g : seq.gates) t += g.duration;
  return t;
}

FidelityEstimate sequence_fidelity_estimate(const GateSequence& seq, const GateErrorModel& err) {
  err.validate();
  FidelityEstimate est;
  for (const auto& g : seq.gates) {
    switch (g.kind) {
      case GateKind::XyEvolution:
        ++est.two_qubit_gates;
        break;
      case GateKind::Rotation:
      case GateKind::IdealField:
        est.single_qubit_gates += g.targets.size();
        break;
    }
  }
  est.fidelity = std::pow(1.0 - err.two_qubit_error, static_cast<double>(est.two_qubit_gates)) *
                 std::pow(1.0 - err.single_qubit_error, static_cast<double>(est.single_qubit_gates));
  return est;
}

nlohmann::json to_json(const GateSequence& seq) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : seq.gates) {
    nlohmann::json j = {{"kind", to_string(g.kind)}, {"targets", g.targets}};
    switch (g.kind) {
      case GateKind::XyEvolution:
        j["phase"] = g.phase;
        break;
      case GateKind::Rotation:
        j["axis"] = std::string(1, axis_name(g.axis));
        j["angle"] = g.angle;
        break;
      case GateKind::IdealField:
        j["axis"] = std::string(1, axis_name(g.axis));
        j["phase"] = g.phase;
        break;
    }
    j["duration_s"] = g.duration;
    gates.push_back(std::move(j));
  }
  return {{"n_sites", seq.n_sites},
          {"trotter_steps", seq.trotter_steps},
          {"metadata",
           {{"model", seq.metadata.model},
            {"boundary", to_string(seq.metadata.boundary)},
            {"theta", seq.metadata.theta},
            {"theta_b", seq.metadata.theta_b}}},
          {"gates", gates}};
}

GateSequence gate_sequence_from_json(const nlohmann::json& j) {
  GateSequence seq;
  seq.n_sites = j.at("n_sites").get<std::size_t>();
  seq.trotter_steps = j.at("trotter_steps").get<std::size_t>();
  const auto& m = j.at("metadata");
  seq.metadata.model = m.at("model").get<std::string>();
  seq.metadata.boundary = parse_boundary(m.at("boundary").get<std::string>());
  seq.metadata.theta = m.at("theta").get<double>();
  seq.metadata.theta_b = m.value("theta_b", 0.0);
  for (const auto& gj : j.at("gates")) {
    const auto kind = gj.at("kind").get<std::string>();
    const auto targets = gj.at("targets").get<std::vector<std::size_t>>();
    const double duration = gj.value("duration_s", 0.0);
    auto axis = [&] {
      const auto a = gj.at("axis").get<std::string>();
      if (a.size() != 1) throw std::invalid_argument("gate axis must be x|y|z");
      return parse_axis(a[0]);
    };
    if (kind == "xy_evolution") {
      if (targets.size() != 2) throw std::invalid_argument("xy_evolution needs exactly two targets");
      seq.gates.push_back(Gate::xy(targets[0], targets[1], gj.at("phase").get<double>(), duration));
    } else if (kind == "rotation") {
      seq.gates.push_back(Gate::rotation(axis(), gj.at("angle").get<double>(), targets, duration));
    } else if (kind == "ideal_field") {
      seq.gates.push_back(Gate::field(axis(), gj.at("phase").get<double>(), targets, duration));
    } else {
      throw std::invalid_argument("unknown gate kind '" + kind + "'");
    }
  }
  seq.validate();
  return seq;
}

}  // namespace dqs
