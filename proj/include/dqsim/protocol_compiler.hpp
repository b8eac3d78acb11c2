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

#pragma once

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

#include "dqsim/model_hamiltonians.hpp"
#include "dqsim/operator_core.hpp"

namespace dqs {

enum class GateKind { XyEvolution, Rotation, IdealField };

std::string to_string(GateKind kind);

/// One element of a digital protocol.
///
///  - XyEvolution: exp[-i phase (sx sx + sy sy) / 2] on targets = {i, j}.
///  - Rotation:    prod_{t in targets} exp(-i angle sigma^axis_t).
///  - IdealField:  exp(-i phase sum_{t in targets} sigma^axis_t).
///
/// `duration` is the nominal wall time in seconds (see GateTimes).
struct Gate {
  GateKind kind = GateKind::XyEvolution;
  std::vector<std::size_t> targets;
  Axis axis = Axis::X;
  double phase = 0.0;
  double angle = 0.0;
  double duration = 0.0;

  static Gate xy(std::size_t i, std::size_t j, double phase, double duration);
  static Gate rotation(Axis axis, double angle, std::vector<std::size_t> targets, double duration);
  static Gate field(Axis axis, double phase, std::vector<std::size_t> targets, double duration);

  bool operator==(const Gate&) const = default;
};

struct SequenceMetadata {
  std::string model;
  Boundary boundary = Boundary::Open;
  /// Simulated phase J t (for tfim: the Ising part).
  double theta = 0.0;
  /// Simulated field phase B t (tfim only).
  double theta_b = 0.0;

  bool operator==(const SequenceMetadata&) const = default;
};

struct GateSequence {
  std::size_t n_sites = 0;
  std::vector<Gate> gates;
  std::size_t trotter_steps = 1;
  SequenceMetadata metadata;

  /// Throws on out-of-range targets, duplicate pair sites, l < 1, non-finite
  /// phases or rotation angles outside (-pi, pi].
  void validate() const;

  bool operator==(const GateSequence&) const = default;
};

struct GateErrorModel {
  double two_qubit_error = 0.05;
  double single_qubit_error = 0.01;

  void validate() const;
};

/// Nominal gate timings. `xy_rate` is the coupling strength of the XY gate
/// (J/2 in the closed-form tables, so J = 2 xy_rate there); an XY gate of
/// phase p takes |p| / xy_rate, a rotation layer takes tau_s and a field
/// gate of phase p takes |p| / g_phi.
struct GateTimes {
  double tau_s = 10e-9;
  double xy_rate = angular(6.4e6);
  double g_phi = angular(10e6);

  void validate() const;
};

enum class ModelKind { Heisenberg, Ising };

std::string to_string(ModelKind m);
ModelKind parse_model(const std::string& s);

/// Two-qubit Heisenberg protocol: xy; Rx(pi/4); xy; Rx(-pi/4); Ry(pi/4); xy;
/// Ry(-pi/4). Exact for any theta because the three blocks commute.
GateSequence compile_heisenberg_pair(double theta, const GateTimes& times = {});

/// Trotterized Heisenberg chain. Each step applies xy on every bond, then the
/// x- and y-conjugated copies of that layer. `step_phases`, if non-empty,
/// overrides the per-step phase theta / l (one entry per step).
GateSequence compile_heisenberg_chain(std::size_t n, double theta, std::size_t l, Boundary boundary,
                                      const GateTimes& times = {},
                                      const std::vector<double>& step_phases = {});

/// Three-site all-pair antiferromagnetic Ising ring. Each pair gets an xy
/// block and an x-minus-y block (xy conjugated by Rx(pi/2) on the first site),
/// which together give exp(-i theta sx sx).
GateSequence compile_ising_frustrated(double theta, const GateTimes& times = {});

/// Transverse-field Ising: the Ising pair blocks at theta_j / l followed by an
/// ideal y-field gate of phase theta_b / l, repeated l times. With
/// theta_b = 0 the field gates are omitted.
GateSequence compile_tfim(std::size_t n, double theta_j, double theta_b, std::size_t l,
                          Boundary boundary, const GateTimes& times = {});

/// Same protocol with every rotation replaced by its adjoint.
GateSequence with_adjoint_rotations(const GateSequence& seq);

/// Second-order Trotter error bound from the closed-form table.
double trotter_error_bound(ModelKind model, std::size_t n, Boundary boundary, double jt,
                           std::size_t l);

/// Closed-form execution time (seconds). For Ising the theta / g_phi term
/// assumes a field phase equal to theta.
double execution_time(ModelKind model, std::size_t n, Boundary boundary, double theta,
                      std::size_t l, const GateTimes& times);

/// Sum of the nominal durations of all gates.
double execution_time(const GateSequence& seq);

struct FidelityEstimate {
  double fidelity = 1.0;
  std::size_t two_qubit_gates = 0;
  std::size_t single_qubit_gates = 0;
};

/// prod (1 - eps) with one two-qubit error per XY gate and one single-qubit
/// error per rotation target and per field target.
FidelityEstimate sequence_fidelity_estimate(const GateSequence& seq, const GateErrorModel& err);

nlohmann::json to_json(const GateSequence& seq);
GateSequence gate_sequence_from_json(const nlohmann::json& j);

}  // namespace dqs
