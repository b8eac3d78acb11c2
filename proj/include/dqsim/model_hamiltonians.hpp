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
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dqsim/operator_core.hpp"

namespace dqs {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Converts an ordinary frequency in Hz to an angular frequency in rad/s.
constexpr double angular(double hz) { return kTwoPi * hz; }

enum class Boundary { Open, Periodic };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

/// coefficient * prod_{site} sigma^{axis}_{site}. An empty factor map is the
/// identity term.
struct PauliString {
  double coefficient = 0.0;
  std::map<std::size_t, Axis> factors;

  bool operator==(const PauliString&) const = default;
};

class SpinHamiltonian {
 public:
  explicit SpinHamiltonian(std::size_t n_sites, std::vector<PauliString> terms = {});

  std::size_t n_sites() const { return n_sites_; }
  const std::vector<PauliString>& terms() const { return terms_; }

  void add(PauliString term);
  SpinHamiltonian& operator+=(const SpinHamiltonian& other);
  SpinHamiltonian scaled(double factor) const;

  HilbertSpace space() const;
  /// Dense 2^n x 2^n matrix.
  ComplexMatrix dense() const;

  bool operator==(const SpinHamiltonian&) const = default;

 private:
  std::size_t n_sites_;
  std::vector<PauliString> terms_;
};

/// Nearest-neighbour bonds (i, j) with i < j for a chain; a ring adds
/// (0, n-1). Periodic rings need n >= 3.
std::vector<std::pair<std::size_t, std::size_t>> bonds(std::size_t n, Boundary boundary);

SpinHamiltonian heisenberg(std::size_t n, double j, Boundary boundary);
/// (j/2)(sx sx + sy sy) on sites i, k.
SpinHamiltonian xy_pair(std::size_t i, std::size_t k, double j);

enum class PairVariant { XZ, YZ, XMinusY };

/// xz: (j/2)(sx sx + sz sz); yz: (j/2)(sy sy + sz sz); x_minus_y: (j/2)(sx sx - sy sy).
SpinHamiltonian rotated_xy_pair(std::size_t i, std::size_t k, double j, PairVariant variant);
SpinHamiltonian ising(std::size_t n, double j, Boundary boundary);
/// ising(n, j, boundary) + b * sum_i sigma^y_i.
SpinHamiltonian tfim(std::size_t n, double j, double b, Boundary boundary);

/// Multilevel transmons dispersively coupled to one resonator mode. All
/// frequencies are angular (rad/s).
struct DeviceParams {
  std::size_t n_transmons = 2;
  std::size_t levels_per_transmon = 3;
  double omega1 = angular(5e9);
  double alpha_r = -0.1;
  double omega_r = angular(7.5e9);
  double g0 = angular(200e6);
  std::size_t fock_cutoff = 5;

  void validate() const;

  /// Energy of transmon level k relative to its ground state. Level 2 follows
  /// from the relative anharmonicity, (omega2 - 2 omega1) / omega1 = alpha_r;
  /// higher levels extend the same Duffing form.
  double level_energy(std::size_t k) const;
  /// g_{k,k+1} = sqrt(k+1) g0.
  double level_coupling(std::size_t k) const;

  /// Transmons first (subsystem j = transmon j), resonator last.
  HilbertSpace space() const;
};

ComplexMatrix device_hamiltonian(const DeviceParams& p);

/// g0^2 omega1 / (omega1^2 - omega_r^2), signed. Coefficient of
/// (sx sx + sy sy) in the second-order effective qubit-qubit Hamiltonian.
double dispersive_xy_rate(const DeviceParams& p);

// JSON form: {"n_sites": n, "terms": [{"coefficient_hz": c/2pi, "paulis": {"0": "x", ...}}]}.
nlohmann::json to_json(const SpinHamiltonian& h);
SpinHamiltonian spin_hamiltonian_from_json(const nlohmann::json& j);

}  // namespace dqs
