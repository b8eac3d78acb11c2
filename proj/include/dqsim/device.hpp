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
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dqsim/lindblad.hpp"
#include "dqsim/model_hamiltonians.hpp"
#include "dqsim/operator_core.hpp"

namespace dqs {

/// Angular rates (rad/s).
struct NoiseParams {
  double kappa = angular(10e3);
  double gamma_phi = angular(20e3);
  double gamma_minus = angular(20e3);

  void validate() const;
  static NoiseParams none() { return {0.0, 0.0, 0.0}; }
};

/// How the effective XY coupling and the rotating frame are obtained.
///  - Spectral: read off the dressed spectrum of the full device Hamiltonian.
///  - DispersiveFormula: c = dispersive_xy_rate, omega1 + g0^2 / (omega1 - omega_r).
enum class CouplingCalibration { Spectral, DispersiveFormula };

std::string to_string(CouplingCalibration c);
CouplingCalibration parse_calibration(const std::string& s);

struct DeviceCalibration {
  CouplingCalibration mode = CouplingCalibration::Spectral;
  /// c in H_eff = c (sx sx + sy sy); signed, rad/s.
  double xy_coefficient = 0.0;
  /// Frame energy of each transmon level relative to level 0.
  std::vector<double> level_energies;
  /// level_energies[1] - omega1.
  double lamb_shift = 0.0;
  /// E(|11>) - 2 E(|10>) in the dressed spectrum (spectral mode only).
  double zz_shift = 0.0;
  /// dispersive_xy_rate for the same parameters, for reference.
  double formula_rate = 0.0;

  double sign() const { return xy_coefficient < 0.0 ? -1.0 : 1.0; }
  /// Wall time of an XY gate exp[-i phase (sx sx + sy sy)/2].
  double xy_gate_time(double phase) const;
};

DeviceCalibration calibrate(const DeviceParams& p, CouplingCalibration mode);

nlohmann::json to_json(const DeviceParams& p);
nlohmann::json to_json(const NoiseParams& n);
nlohmann::json to_json(const DeviceCalibration& c);

/// Transmon-resonator device with its Lindblad channels and rotating frame.
///
/// Spin basis (up, down) maps to transmon levels (1, 0): sigma_z = |1><1| - |0><0|
/// and sigma^- = |0><1| on the qubit subspace, zero on higher levels.
class DeviceModel {
 public:
  DeviceModel(DeviceParams params, NoiseParams noise,
              CouplingCalibration mode = CouplingCalibration::Spectral);

  const DeviceParams& params() const { return params_; }
  const NoiseParams& noise() const { return noise_; }
  const DeviceCalibration& calibration() const { return calibration_; }
  const HilbertSpace& space() const { return space_; }
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<LindbladChannel>& channels() const { return channels_; }

  /// Transmon level for a spin basis index (0 = up, 1 = down).
  static std::size_t level_of_spin(std::size_t spin) { return spin == 0 ? 1 : 0; }

  /// Lab-frame density matrix of a qubit-register state with the resonator in vacuum.
  ComplexMatrix embed_qubit_state(const QuantumState& qubits) const;

  /// Single-qubit spin unitary applied to each listed transmon on levels
  /// {0,1}, identity on higher levels and on the resonator.
  ComplexMatrix lift_single_qubit(const ComplexMatrix& u2, std::span<const std::size_t> transmons) const;

  /// F(t)^+ op F(t): the lab-frame form of an operator defined in the frame
  /// rotating with the calibrated level energies.
  ComplexMatrix from_rotating_frame(const ComplexMatrix& op, double t) const;

  /// Rotating-frame block of rho on the qubit subspace, in the spin basis,
  /// after tracing out the resonator. Trace = 1 - leakage.
  ComplexMatrix qubit_block(const ComplexMatrix& rho_lab, double t) const;

 private:
  std::vector<cplx> frame_phases(double t) const;

  DeviceParams params_;
  NoiseParams noise_;
  DeviceCalibration calibration_;
  HilbertSpace space_;
  ComplexMatrix hamiltonian_;
  std::vector<LindbladChannel> channels_;
  std::vector<std::size_t> spin_to_device_;  // spin register index -> device index (vacuum)
};

}  // namespace dqs
