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

#include "dqsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "parallel.hpp"

namespace dqs {

namespace {

ComplexMatrix single_qubit_exp(Axis axis, double angle) {
  return std::cos(angle) * identity(2) - cplx(0.0, std::sin(angle)) * pauli(axis);
}

// Spectral form of a spin Hamiltonian for repeated exp(-i theta H) psi.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed for reference Hamiltonian");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  ComplexVector apply(double theta, const ComplexVector& psi) const {
    ComplexVector coeff = vectors_.adjoint() * psi;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::exp(cplx(0.0, -values_(k) * theta));
    return vectors_ * coeff;
  }

 private:
  RealVector values_;
  ComplexMatrix vectors_;
};

ComplexMatrix site_operator(const ComplexMatrix& op, std::size_t site, std::size_t n) {
  const std::size_t s[] = {site};
  return embed(op, s, HilbertSpace(std::vector<std::size_t>(n, 2)));
}

}  // namespace

QuantumState evolve_unitary(const ComplexMatrix& h, double t, const QuantumState& state) {
  const auto n = static_cast<Eigen::Index>(state.space().total());
  if (h.rows() != n || h.cols() != n) throw DimensionError("evolve_unitary: Hamiltonian shape mismatch");
  const ComplexMatrix u = expm_hermitian(h, t);
  if (state.is_pure()) return QuantumState::pure(state.space(), u * state.vector());
  return QuantumState::density(state.space(), u * state.matrix() * u.adjoint());
}

ComplexMatrix gate_unitary(const Gate& gate, std::size_t n_sites) {
  const HilbertSpace hs(std::vector<std::size_t>(n_sites, 2));
  for (std::size_t t : gate.targets) {
    if (t >= n_sites) throw DimensionError("gate target out of range");
  }
  switch (gate.kind) {
    case GateKind::XyEvolution: {
      if (gate.targets.size() != 2 || gate.targets[0] == gate.targets[1]) {
        throw DimensionError("xy_evolution needs two distinct sites");
      }
      const ComplexMatrix gen = 0.5 * (kron(pauli(Axis::X), pauli(Axis::X)) + kron(pauli(Axis::Y), pauli(Axis::Y)));
      const std::size_t sites[] = {std::min(gate.targets[0], gate.targets[1]),
                                   std::max(gate.targets[0], gate.targets[1])};
      return embed(expm_hermitian(gen, gate.phase), sites, hs);
    }
    case GateKind::Rotation:
    case GateKind::IdealField: {
      // Both are products of commuting single-site exponentials.
      const double angle = gate.kind == GateKind::Rotation ? gate.angle : gate.phase;
      const ComplexMatrix local = single_qubit_exp(gate.axis, angle);
      const auto dim = static_cast<Eigen::Index>(hs.total());
      ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
      for (std::size_t t : gate.targets) u = site_operator(local, t, n_sites) * u;
      return u;
    }
  }
  throw std::invalid_argument("unknown gate kind");
}

ComplexMatrix sequence_unitary(const GateSequence& seq) {
  seq.validate();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << seq.n_sites);
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& g : seq.gates) u = gate_unitary(g, seq.n_sites) * u;
  return u;
}

IdealRun run_sequence_ideal(const GateSequence& seq, const QuantumState& state) {
  if (state.space() != HilbertSpace(std::vector<std::size_t>(seq.n_sites, 2))) {
    throw DimensionError("run_sequence_ideal: state does not match the sequence register");
  }
  ComplexMatrix u = sequence_unitary(seq);
  if (state.is_pure()) return {QuantumState::pure(state.space(), u * state.vector()), std::move(u)};
  QuantumState out = QuantumState::density(state.space(), u * state.matrix() * u.adjoint());
  return {std::move(out), std::move(u)};
}

ProtocolFamily heisenberg_pair_family(const GateTimes& times) {
  return {"heisenberg-pair", heisenberg(2, 1.0, Boundary::Open),
          [times](double theta, std::size_t) { return compile_heisenberg_pair(theta, times); }};
}

ProtocolFamily heisenberg_chain_family(std::size_t n, Boundary boundary, const GateTimes& times) {
  return {"heisenberg-chain", heisenberg(n, 1.0, boundary), [=](double theta, std::size_t l) {
            return compile_heisenberg_chain(n, theta, l, boundary, times);
          }};
}

ProtocolFamily ising_frustrated_family(const GateTimes& times) {
  return {"ising-frustrated", ising(3, 1.0, Boundary::Periodic),
          [times](double theta, std::size_t) { return compile_ising_frustrated(theta, times); }};
}

ProtocolFamily tfim_family(std::size_t n, double b_over_j, Boundary boundary, const GateTimes& times) {
  return {"tfim", tfim(n, 1.0, b_over_j, boundary), [=](double theta, std::size_t l) {
            return compile_tfim(n, theta, b_over_j * theta, l, boundary, times);
          }};
}

DigitalErrorTable digital_error_curve(const ProtocolFamily& family, const std::vector<double>& theta_grid,
                                      const std::vector<std::size_t>& l_list, const QuantumState& initial,
                                      std::size_t threads) {
  if (initial.space() != family.reference.space()) {
    throw DimensionError("digital_error_curve: initial state does not match the model register");
  }
  for (std::size_t l : l_list) {
    if (l < 1) throw std::invalid_argument("digital_error_curve: Trotter step counts must be >= 1");
  }
  const ComplexVector& psi0 = initial.vector();
  const SpectralPropagator exact(family.reference.dense());

  DigitalErrorTable table;
  table.thetas = theta_grid;
  table.steps = l_list;
  table.loss.assign(l_list.size(), std::vector<double>(theta_grid.size(), 0.0));

  const std::size_t cells = l_list.size() * theta_grid.size();
  detail::parallel_for(cells, threads, [&](std::size_t cell) {
    const std::size_t k = cell / theta_grid.size();
    const std::size_t i = cell % theta_grid.size();
    const double theta = theta_grid[i];
    const GateSequence seq = family.compile(theta, l_list[k]);
    ComplexVector psi = psi0;
    for (const auto& g : seq.gates) psi = gate_unitary(g, seq.n_sites) * psi;
    const ComplexVector target = exact.apply(theta, psi0);
    // 1 - |<t|psi>|^2 as the squared norm of the component orthogonal to t,
    // which avoids the cancellation of the direct form.
    const double loss = (psi - target.dot(psi) * target).squaredNorm();
    table.loss[k][i] = loss < kLossFloor ? 0.0 : loss;
  });
  return table;
}

double accumulated_gate_error(double epsilon, std::size_t l) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1)");
  return static_cast<double>(l) * epsilon;
}

QuantumState spin_product_state(const std::string& pattern) {
  if (pattern.empty()) throw std::invalid_argument("spin pattern is empty");
  std::size_t index = 0;
  for (char c : pattern) {
    if (c != 'u' && c != 'd') throw std::invalid_argument("spin pattern must contain only 'u' and 'd'");
    index = (index << 1U) | (c == 'd' ? 1U : 0U);
  }
  const HilbertSpace hs(std::vector<std::size_t>(pattern.size(), 2));
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(hs.total()));
  psi(static_cast<Eigen::Index>(index)) = 1.0;
  return QuantumState::pure(hs, std::move(psi));
}

QuantumState qubit_product_state(const std::vector<std::pair<cplx, cplx>>& amplitudes) {
  if (amplitudes.empty()) throw std::invalid_argument("qubit_product_state needs at least one qubit");
  ComplexMatrix psi = ComplexMatrix::Ones(1, 1);
  for (const auto& [up, down] : amplitudes) {
    const double norm = std::sqrt(std::norm(up) + std::norm(down));
    if (norm == 0.0) throw std::invalid_argument("qubit amplitudes must not both vanish");
    ComplexMatrix q(2, 1);
    q << up / norm, down / norm;
    psi = kron(psi, q);
  }
  const HilbertSpace hs(std::vector<std::size_t>(amplitudes.size(), 2));
  return QuantumState::pure(hs, ComplexVector(Eigen::Map<const ComplexVector>(psi.data(), psi.size())));
}

Trajectory run_sequence_on_device(const ProtocolFamily& family, const DeviceModel& device,
                                  const QuantumState& initial_qubits, const std::vector<double>& theta_grid,
                                  const DeviceRunOptions& options) {
  const std::size_t n = device.params().n_transmons;
  if (n != 2) throw std::invalid_argument("device runs support exactly two transmons");
  if (family.reference.n_sites() != n) {
    throw DimensionError("device run: protocol register does not match the transmon count");
  }
  if (!initial_qubits.is_pure()) throw std::invalid_argument("device run: initial register state must be pure");
  for (std::size_t k = 1; k < theta_grid.size(); ++k) {
    if (theta_grid[k] < theta_grid[k - 1]) throw std::invalid_argument("device run: theta grid must be sorted");
  }

  const DeviceCalibration& cal = device.calibration();
  const double sign = cal.sign();
  const LindbladIntegrator integrator(device.hamiltonian(), device.channels(), options.integrator);
  const ComplexMatrix rho0 = device.embed_qubit_state(initial_qubits);
  const SpectralPropagator exact(family.reference.dense());
  const ComplexVector& psi0 = initial_qubits.vector();

  std::vector<ComplexMatrix> sx;
  for (std::size_t j = 0; j < n; ++j) sx.push_back(site_operator(pauli(Axis::X), j, n));

  Trajectory traj;
  traj.samples.resize(theta_grid.size());
  detail::parallel_for(theta_grid.size(), options.threads, [&](std::size_t i) {
    const double theta = theta_grid[i];
    const GateSequence seq = family.compile(theta, 1);
    seq.validate();
    ComplexMatrix rho = rho0;
    double t = 0.0;
    for (const auto& g : seq.gates) {
      if (g.kind == GateKind::XyEvolution) {
        const double duration = cal.xy_gate_time(g.phase);
        integrator.evolve(rho, duration);
        t += duration;
        continue;
      }
      const double angle = g.kind == GateKind::Rotation ? g.angle : g.phase;
      const ComplexMatrix u = device.from_rotating_frame(
          device.lift_single_qubit(single_qubit_exp(g.axis, angle), g.targets), t);
      rho = u * rho * u.adjoint();
    }

    const ComplexMatrix block = device.qubit_block(rho, t);
    const ComplexVector ideal = exact.apply(sign * theta, psi0);

    TrajectorySample& s = traj.samples[i];
    s.theta = theta;
    s.wall_time = t;
    s.fidelity = std::max(0.0, ideal.dot(block * ideal).real());
    s.leakage = std::max(0.0, 1.0 - block.trace().real());
    for (std::size_t j = 0; j < n; ++j) {
      s.sx_ideal.push_back(ideal.dot(sx[j] * ideal).real());
      s.sx_device.push_back((block * sx[j]).trace().real());
    }
  });

  double max_leakage = 0.0;
  for (const auto& s : traj.samples) max_leakage = std::max(max_leakage, s.leakage);
  nlohmann::json warnings = nlohmann::json::array();
  if (max_leakage > options.leakage_warning) {
    warnings.push_back("leakage outside the qubit subspace reached " + std::to_string(max_leakage));
  }
  traj.metadata = {{"protocol", family.name},
                   {"reference", to_json(family.reference)},
                   {"reference_sign", sign},
                   {"device", to_json(device.params())},
                   {"noise", to_json(device.noise())},
                   {"calibration", to_json(cal)},
                   {"integrator", {{"method", "rk4-interaction-picture"}, {"dt_s", options.integrator.dt}}},
                   {"max_leakage", max_leakage},
                   {"warnings", warnings}};
  return traj;
}

}  // namespace dqs
