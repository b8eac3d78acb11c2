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
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dqsim/device.hpp"
#include "dqsim/lindblad.hpp"
#include "dqsim/model_hamiltonians.hpp"
#include "dqsim/operator_core.hpp"
#include "dqsim/protocol_compiler.hpp"

namespace dqs {

/// exp(-i h t) psi, or U rho U^+.
QuantumState evolve_unitary(const ComplexMatrix& h, double t, const QuantumState& state);

/// Exact unitary of one gate on an n-site register.
ComplexMatrix gate_unitary(const Gate& gate, std::size_t n_sites);

/// Composed unitary U_last ... U_first.
ComplexMatrix sequence_unitary(const GateSequence& seq);

struct IdealRun {
  QuantumState state;
  ComplexMatrix unitary;
};

IdealRun run_sequence_ideal(const GateSequence& seq, const QuantumState& state);

/// A family of protocols indexed by simulated phase and Trotter step count,
/// together with its target: U_exact(theta) = exp(-i theta reference).
struct ProtocolFamily {
  std::string name;
  SpinHamiltonian reference;
  std::function<GateSequence(double theta, std::size_t l)> compile;
};

ProtocolFamily heisenberg_pair_family(const GateTimes& times = {});
ProtocolFamily heisenberg_chain_family(std::size_t n, Boundary boundary, const GateTimes& times = {});
ProtocolFamily ising_frustrated_family(const GateTimes& times = {});
/// Field phase theta_b = b_over_j * theta.
ProtocolFamily tfim_family(std::size_t n, double b_over_j, Boundary boundary, const GateTimes& times = {});

/// Losses below this are rounding noise and are reported as 0.
inline constexpr double kLossFloor = 64.0 * std::numeric_limits<double>::epsilon();

/// Fidelity loss 1 - |<psi_exact|psi_digital>|^2 on a (theta, l) grid.
struct DigitalErrorTable {
  std::vector<double> thetas;
  std::vector<std::size_t> steps;
  /// loss[k][i]: steps[k], thetas[i].
  std::vector<std::vector<double>> loss;
};

DigitalErrorTable digital_error_curve(const ProtocolFamily& family, const std::vector<double>& theta_grid,
                                      const std::vector<std::size_t>& l_list, const QuantumState& initial,
                                      std::size_t threads = 1);

/// Linear accumulation l * epsilon of a per-step gate error.
double accumulated_gate_error(double epsilon, std::size_t l);

/// Computational-basis product state from a string of 'u'/'d' per site.
QuantumState spin_product_state(const std::string& pattern);

/// Product of normalized single-qubit (up, down) amplitude pairs.
QuantumState qubit_product_state(const std::vector<std::pair<cplx, cplx>>& amplitudes);

struct TrajectorySample {
  double theta = 0.0;
  double wall_time = 0.0;
  double fidelity = 0.0;
  std::vector<double> sx_ideal;
  std::vector<double> sx_device;
  double leakage = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  nlohmann::json metadata;
};

struct DeviceRunOptions {
  LindbladOptions integrator;
  std::size_t threads = 1;
  double leakage_warning = 0.1;
};

/// Runs family.compile(theta, 1) on the device for every theta in the grid:
/// XY gates integrate the master equation under the device Hamiltonian for
/// |phase| / (2|c|), rotations and field gates are instantaneous ideal
/// unitaries in the rotating frame. Each sample is compared with
/// exp(-i sign(c) theta reference) |psi0>.
Trajectory run_sequence_on_device(const ProtocolFamily& family, const DeviceModel& device,
                                  const QuantumState& initial_qubits, const std::vector<double>& theta_grid,
                                  const DeviceRunOptions& options = {});

}  // namespace dqs
