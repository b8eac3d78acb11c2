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

#include "dqsim/device.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace dqs {

namespace {

// Flat index of a bare product state: given transmon levels, resonator in |photons>.
std::size_t bare_index(const HilbertSpace& hs, const std::vector<std::size_t>& levels,
                       std::size_t photons) {
  std::vector<std::size_t> digits = levels;
  digits.push_back(photons);
  return hs.index(digits);
}

struct Spectrum {
  RealVector energies;
  ComplexMatrix vectors;
};

// Eigenvectors ranked by total weight on a set of bare states, strongest first.
std::vector<Eigen::Index> rank_by_weight(const Spectrum& s, const std::vector<std::size_t>& bare) {
  std::vector<double> weight(static_cast<std::size_t>(s.energies.size()), 0.0);
  for (std::size_t b : bare) {
    for (Eigen::Index m = 0; m < s.energies.size(); ++m) {
      weight[static_cast<std::size_t>(m)] += std::norm(s.vectors(static_cast<Eigen::Index>(b), m));
    }
  }
  std::vector<Eigen::Index> order(weight.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return weight[static_cast<std::size_t>(a)] > weight[static_cast<std::size_t>(b)];
  });
  double captured = 0.0;
  for (std::size_t k = 0; k < bare.size(); ++k) captured += weight[static_cast<std::size_t>(order[k])];
  if (captured < 0.5 * static_cast<double>(bare.size())) {
    throw NumericalError(
        "device calibration: dressed states are not adiabatically connected to the bare states "
        "(dispersive regime violated)");
  }
  order.resize(bare.size());
  return order;
}

DeviceCalibration spectral_calibration(const DeviceParams& p) {
  const HilbertSpace hs = p.space();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(device_hamiltonian(p));
  if (es.info() != Eigen::Success) throw NumericalError("device calibration: eigensolver failed");
  const Spectrum s{es.eigenvalues(), es.eigenvectors()};
  const std::size_t n = p.n_transmons;

  const std::vector<std::size_t> ground_levels(n, 0);
  const double e_ground = s.energies(rank_by_weight(s, {bare_index(hs, ground_levels, 0)})[0]);

  DeviceCalibration c;
  c.mode = CouplingCalibration::Spectral;
  c.formula_rate = dispersive_xy_rate(p);
  c.level_energies.assign(p.levels_per_transmon, 0.0);

  for (std::size_t k = 1; k < p.levels_per_transmon; ++k) {
    std::vector<std::size_t> bare;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> lv(n, 0);
      lv[j] = k;
      bare.push_back(bare_index(hs, lv, 0));
    }
    const auto ranked = rank_by_weight(s, bare);
    double mean = 0.0;
    for (auto m : ranked) mean += s.energies(m);
    mean /= static_cast<double>(ranked.size());
    c.level_energies[k] = mean - e_ground;

    if (k == 1 && n >= 2) {
      // Single-excitation manifold of c (sx sx + sy sy) on all pairs: the
      // symmetric state sits 2 c n above the others.
      Eigen::Index sym = ranked[0];
      double best = -1.0;
      for (auto m : ranked) {
        cplx amp = 0.0;
        for (std::size_t b : bare) amp += s.vectors(static_cast<Eigen::Index>(b), m);
        const double ov = std::norm(amp) / static_cast<double>(n);
        if (ov > best) {
          best = ov;
          sym = m;
        }
      }
      double others = 0.0;
      for (auto m : ranked) {
        if (m != sym) others += s.energies(m);
      }
      others /= static_cast<double>(n - 1);
      c.xy_coefficient = (s.energies(sym) - others) / (2.0 * static_cast<double>(n));
    }
  }
  c.lamb_shift = c.level_energies[1] - p.omega1;

  if (n >= 2) {
    std::vector<std::size_t> lv(n, 0);
    lv[0] = 1;
    lv[1] = 1;
    const double e11 = s.energies(rank_by_weight(s, {bare_index(hs, lv, 0)})[0]) - e_ground;
    c.zz_shift = e11 - 2.0 * c.level_energies[1];
  }
  return c;
}

DeviceCalibration formula_calibration(const DeviceParams& p) {
  DeviceCalibration c;
  c.mode = CouplingCalibration::DispersiveFormula;
  c.formula_rate = dispersive_xy_rate(p);
  c.xy_coefficient = c.formula_rate;
  c.lamb_shift = p.g0 * p.g0 / (p.omega1 - p.omega_r);
  c.level_energies.resize(p.levels_per_transmon);
  for (std::size_t k = 0; k < p.levels_per_transmon; ++k) {
    c.level_energies[k] = p.level_energy(k) + static_cast<double>(k) * c.lamb_shift;
  }
  return c;
}

}  // namespace

void NoiseParams::validate() const {
  auto ok = [](double r) { return r >= 0.0 && std::isfinite(r); };
  if (!ok(kappa) || !ok(gamma_phi) || !ok(gamma_minus)) {
    throw std::invalid_argument("noise rates must be finite and non-negative");
  }
}

std::string to_string(CouplingCalibration c) {
  return c == CouplingCalibration::Spectral ? "spectral" : "dispersive-formula";
}

CouplingCalibration parse_calibration(const std::string& s) {
  if (s == "spectral") return CouplingCalibration::Spectral;
  if (s == "dispersive-formula") return CouplingCalibration::DispersiveFormula;
  throw std::invalid_argument("unknown calibration '" + s + "' (expected spectral|dispersive-formula)");
}

double DeviceCalibration::xy_gate_time(double phase) const {
  if (xy_coefficient == 0.0) throw std::invalid_argument("device has no XY coupling");
  if (phase < 0.0) {
    throw std::invalid_argument("device XY gates need a non-negative phase; the coupling sign is fixed");
  }
  return phase / (2.0 * std::abs(xy_coefficient));
}

DeviceCalibration calibrate(const DeviceParams& p, CouplingCalibration mode) {
  p.validate();
  return mode == CouplingCalibration::Spectral ? spectral_calibration(p) : formula_calibration(p);
}

nlohmann::json to_json(const DeviceParams& p) {
  return {{"n_transmons", p.n_transmons},
          {"levels_per_transmon", p.levels_per_transmon},
          {"omega1_hz", p.omega1 / kTwoPi},
          {"alpha_r", p.alpha_r},
          {"omega_r_hz", p.omega_r / kTwoPi},
          {"g0_hz", p.g0 / kTwoPi},
          {"fock_cutoff", p.fock_cutoff}};
}

nlohmann::json to_json(const NoiseParams& n) {
  return {{"kappa_hz", n.kappa / kTwoPi},
          {"gamma_phi_hz", n.gamma_phi / kTwoPi},
          {"gamma_minus_hz", n.gamma_minus / kTwoPi}};
}

nlohmann::json to_json(const DeviceCalibration& c) {
  std::vector<double> levels_hz;
  for (double e : c.level_energies) levels_hz.push_back(e / kTwoPi);
  return {{"mode", to_string(c.mode)},
          {"xy_coefficient_hz", c.xy_coefficient / kTwoPi},
          {"coupling_sign", c.sign()},
          {"lamb_shift_hz", c.lamb_shift / kTwoPi},
          {"zz_shift_hz", c.zz_shift / kTwoPi},
          {"formula_rate_hz", c.formula_rate / kTwoPi},
          {"frame_level_energies_hz", levels_hz}};
}

DeviceModel::DeviceModel(DeviceParams params, NoiseParams noise, CouplingCalibration mode)
    : params_(params),
      noise_(noise),
      calibration_(calibrate(params, mode)),
      space_(params.space()),
      hamiltonian_(device_hamiltonian(params)) {
  noise_.validate();
  const std::size_t n = params_.n_transmons;
  const std::size_t d = params_.levels_per_transmon;

  const std::size_t res_site[] = {n};
  channels_.push_back({embed(annihilation(params_.fock_cutoff), res_site, space_), noise_.kappa, "kappa"});
  ComplexMatrix sz = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  sz(1, 1) = 1.0;
  sz(0, 0) = -1.0;
  const ComplexMatrix sminus = ladder(d, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t site[] = {j};
    channels_.push_back({embed(sz, site, space_), noise_.gamma_phi, "gamma_phi_" + std::to_string(j + 1)});
    channels_.push_back({embed(sminus, site, space_), noise_.gamma_minus, "gamma_minus_" + std::to_string(j + 1)});
  }

  const std::size_t reg = std::size_t{1} << n;
  spin_to_device_.resize(reg);
  for (std::size_t s = 0; s < reg; ++s) {
    std::vector<std::size_t> lv(n);
    for (std::size_t j = 0; j < n; ++j) lv[j] = level_of_spin((s >> (n - 1 - j)) & 1U);
    spin_to_device_[s] = bare_index(space_, lv, 0);
  }
}

ComplexMatrix DeviceModel::embed_qubit_state(const QuantumState& qubits) const {
  const std::size_t reg = spin_to_device_.size();
  if (qubits.space().total() != reg || qubits.space().subsystems() != params_.n_transmons) {
    throw DimensionError("embed_qubit_state: register does not match the transmon count");
  }
  const QuantumState dens = qubits.to_density();
  const auto n = static_cast<Eigen::Index>(space_.total());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < reg; ++i) {
    for (std::size_t j = 0; j < reg; ++j) {
      rho(static_cast<Eigen::Index>(spin_to_device_[i]), static_cast<Eigen::Index>(spin_to_device_[j])) =
          dens.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return rho;
}

std::vector<cplx> DeviceModel::frame_phases(double t) const {
  std::vector<cplx> phases(space_.total());
  for (std::size_t idx = 0; idx < space_.total(); ++idx) {
    const auto digits = space_.digits(idx);
    double e = 0.0;
    for (std::size_t j = 0; j < params_.n_transmons; ++j) e += calibration_.level_energies[digits[j]];
    phases[idx] = std::exp(cplx(0.0, e * t));
  }
  return phases;
}

ComplexMatrix DeviceModel::lift_single_qubit(const ComplexMatrix& u2,
                                             std::span<const std::size_t> transmons) const {
  if (u2.rows() != 2 || u2.cols() != 2) throw DimensionError("lift_single_qubit: expects a 2x2 operator");
  const auto d = static_cast<Eigen::Index>(params_.levels_per_transmon);
  ComplexMatrix local = ComplexMatrix::Identity(d, d);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      local(static_cast<Eigen::Index>(level_of_spin(static_cast<std::size_t>(a))),
            static_cast<Eigen::Index>(level_of_spin(static_cast<std::size_t>(b)))) = u2(a, b);
    }
  }
  const auto n = static_cast<Eigen::Index>(space_.total());
  ComplexMatrix out = ComplexMatrix::Identity(n, n);
  for (std::size_t j : transmons) {
    if (j >= params_.n_transmons) throw DimensionError("lift_single_qubit: transmon index out of range");
    const std::size_t site[] = {j};
    out = embed(local, site, space_) * out;
  }
  return out;
}

ComplexMatrix DeviceModel::from_rotating_frame(const ComplexMatrix& op, double t) const {
  const auto n = static_cast<Eigen::Index>(space_.total());
  if (op.rows() != n || op.cols() != n) {
    throw DimensionError("from_rotating_frame: expects an operator on the full device space");
  }
  const auto phases = frame_phases(t);
  ComplexMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      out(r, c) = std::conj(phases[static_cast<std::size_t>(r)]) * op(r, c) *
                  phases[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

ComplexMatrix DeviceModel::qubit_block(const ComplexMatrix& rho_lab, double t) const {
  const auto phases = frame_phases(t);
  const std::size_t reg = spin_to_device_.size();
  const auto r = static_cast<Eigen::Index>(reg);
  ComplexMatrix block = ComplexMatrix::Zero(r, r);
  for (std::size_t i = 0; i < reg; ++i) {
    for (std::size_t j = 0; j < reg; ++j) {
      cplx sum = 0.0;
      for (std::size_t m = 0; m < params_.fock_cutoff; ++m) {
        sum += rho_lab(static_cast<Eigen::Index>(spin_to_device_[i] + m),
                       static_cast<Eigen::Index>(spin_to_device_[j] + m));
      }
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          phases[spin_to_device_[i]] * sum * std::conj(phases[spin_to_device_[j]]);
    }
  }
  return block;
}

}  // namespace dqs
