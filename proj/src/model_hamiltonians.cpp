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

#include "dqsim/model_hamiltonians.hpp"

#include <cmath>
#include <stdexcept>

namespace dqs {

std::string to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected open|periodic)");
}

SpinHamiltonian::SpinHamiltonian(std::size_t n_sites, std::vector<PauliString> terms)
    : n_sites_(n_sites) {
  if (n_sites_ == 0) throw DimensionError("SpinHamiltonian needs at least one site");
  for (auto& t : terms) add(std::move(t));
}

void SpinHamiltonian::add(PauliString term) {
  if (!std::isfinite(term.coefficient)) throw InvariantError("Pauli string coefficient is not finite");
  for (const auto& [site, axis] : term.factors) {
    (void)axis;
    if (site >= n_sites_) {
      throw DimensionError("Pauli string references site " + std::to_string(site) + " of a " +
                           std::to_string(n_sites_) + "-site model");
    }
  }
  terms_.push_back(std::move(term));
}

SpinHamiltonian& SpinHamiltonian::operator+=(const SpinHamiltonian& other) {
  if (other.n_sites_ != n_sites_) throw DimensionError("cannot add Hamiltonians on different site counts");
  for (const auto& t : other.terms_) terms_.push_back(t);
  return *this;
}

SpinHamiltonian SpinHamiltonian::scaled(double factor) const {
  SpinHamiltonian out = *this;
  for (auto& t : out.terms_) t.coefficient *= factor;
  return out;
}

HilbertSpace SpinHamiltonian::space() const {
  return HilbertSpace(std::vector<std::size_t>(n_sites_, 2));
}

ComplexMatrix SpinHamiltonian::dense() const {
  const HilbertSpace hs = space();
  const auto n = static_cast<Eigen::Index>(hs.total());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& term : terms_) {
    if (term.factors.empty()) {
      out += term.coefficient * ComplexMatrix::Identity(n, n);
      continue;
    }
    std::vector<std::size_t> sites;
    ComplexMatrix op = ComplexMatrix::Identity(1, 1);
    for (const auto& [site, axis] : term.factors) {
      sites.push_back(site);
      op = kron(op, pauli(axis));
    }
    out += term.coefficient * embed(op, sites, hs);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> bonds(std::size_t n, Boundary boundary) {
  if (n < 2) throw std::invalid_argument("spin chain needs n >= 2");
  if (boundary == Boundary::Periodic && n < 3) {
    throw std::invalid_argument("periodic boundary needs n >= 3");
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i + 1 < n; ++i) out.emplace_back(i, i + 1);
  if (boundary == Boundary::Periodic) out.emplace_back(0, n - 1);
  return out;
}

namespace {

PauliString two_site(double c, std::size_t i, Axis a, std::size_t k, Axis b) {
  if (i == k) throw std::invalid_argument("pair interaction needs two distinct sites");
  PauliString p;
  p.coefficient = c;
  p.factors.emplace(i, a);
  p.factors.emplace(k, b);
  return p;
}

std::size_t pair_sites(std::size_t i, std::size_t k) { return std::max(i, k) + 1; }

}  // namespace

SpinHamiltonian heisenberg(std::size_t n, double j, Boundary boundary) {
  SpinHamiltonian h(n);
  for (const auto& [a, b] : bonds(n, boundary)) {
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) h.add(two_site(j, a, ax, b, ax));
  }
  return h;
}

SpinHamiltonian xy_pair(std::size_t i, std::size_t k, double j) {
  SpinHamiltonian h(pair_sites(i, k));
  h.add(two_site(j / 2, i, Axis::X, k, Axis::X));
  h.add(two_site(j / 2, i, Axis::Y, k, Axis::Y));
  return h;
}

SpinHamiltonian rotated_xy_pair(std::size_t i, std::size_t k, double j, PairVariant variant) {
  SpinHamiltonian h(pair_sites(i, k));
  switch (variant) {
    case PairVariant::XZ:
      h.add(two_site(j / 2, i, Axis::X, k, Axis::X));
      h.add(two_site(j / 2, i, Axis::Z, k, Axis::Z));
      break;
    case PairVariant::YZ:
      h.add(two_site(j / 2, i, Axis::Y, k, Axis::Y));
      h.add(two_site(j / 2, i, Axis::Z, k, Axis::Z));
      break;
    case PairVariant::XMinusY:
      h.add(two_site(j / 2, i, Axis::X, k, Axis::X));
      h.add(two_site(-j / 2, i, Axis::Y, k, Axis::Y));
      break;
  }
  return h;
}

SpinHamiltonian ising(std::size_t n, double j, Boundary boundary) {
  SpinHamiltonian h(n);
  for (const auto& [a, b] : bonds(n, boundary)) h.add(two_site(j, a, Axis::X, b, Axis::X));
  return h;
}

SpinHamiltonian tfim(std::size_t n, double j, double b, Boundary boundary) {
  SpinHamiltonian h = ising(n, j, boundary);
  if (b != 0.0) {
    for (std::size_t i = 0; i < n; ++i) h.add(PauliString{b, {{i, Axis::Y}}});
  }
  return h;
}

void DeviceParams::validate() const {
  if (n_transmons < 1) throw std::invalid_argument("device needs at least one transmon");
  if (levels_per_transmon < 2) throw std::invalid_argument("levels_per_transmon must be >= 2");
  if (fock_cutoff < 2) throw std::invalid_argument("fock_cutoff must be >= 2");
  if (!(omega1 > 0.0) || !(omega_r > 0.0) || !(g0 > 0.0)) {
    throw std::invalid_argument("omega1, omega_r and g0 must be positive");
  }
  if (!std::isfinite(alpha_r)) throw std::invalid_argument("alpha_r must be finite");
}

double DeviceParams::level_energy(std::size_t k) const {
  const double kk = static_cast<double>(k);
  return kk * omega1 + kk * (kk - 1.0) / 2.0 * alpha_r * omega1;
}

double DeviceParams::level_coupling(std::size_t k) const {
  return std::sqrt(static_cast<double>(k + 1)) * g0;
}

HilbertSpace DeviceParams::space() const {
  std::vector<std::size_t> dims(n_transmons, levels_per_transmon);
  dims.push_back(fock_cutoff);
  return HilbertSpace(std::move(dims));
}

ComplexMatrix device_hamiltonian(const DeviceParams& p) {
  p.validate();
  const HilbertSpace hs = p.space();
  const std::size_t d = p.levels_per_transmon;
  const std::size_t res = p.n_transmons;
  const auto n = static_cast<Eigen::Index>(hs.total());

  const ComplexMatrix a = annihilation(p.fock_cutoff);
  const ComplexMatrix number = a.adjoint() * a;
  const ComplexMatrix quadrature = a + a.adjoint();

  ComplexMatrix levels = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    levels(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = p.level_energy(k);
  }
  ComplexMatrix coupling = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const ComplexMatrix l = ladder(d, k);
    coupling += p.level_coupling(k) * (l + l.adjoint());
  }
  const ComplexMatrix interaction = kron(coupling, quadrature);

  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  const std::size_t res_site[] = {res};
  h += p.omega_r * embed(number, res_site, hs);
  for (std::size_t t = 0; t < p.n_transmons; ++t) {
    const std::size_t site[] = {t};
    const std::size_t with_res[] = {t, res};
    h += embed(levels, site, hs);
    h += embed(interaction, with_res, hs);
  }
  return h;
}

double dispersive_xy_rate(const DeviceParams& p) {
  const double denom = p.omega1 * p.omega1 - p.omega_r * p.omega_r;
  if (std::abs(p.omega1 - p.omega_r) <= 1e-12 * std::max(p.omega1, p.omega_r)) {
    throw std::invalid_argument("dispersive_xy_rate: qubit and resonator are resonant");
  }
  return p.g0 * p.g0 * p.omega1 / denom;
}

nlohmann::json to_json(const SpinHamiltonian& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : h.terms()) {
    nlohmann::json paulis = nlohmann::json::object();
    for (const auto& [site, axis] : t.factors) paulis[std::to_string(site)] = std::string(1, axis_name(axis));
    terms.push_back({{"coefficient_hz", t.coefficient / kTwoPi}, {"paulis", paulis}});
  }
  return {{"n_sites", h.n_sites()}, {"terms", terms}};
}

SpinHamiltonian spin_hamiltonian_from_json(const nlohmann::json& j) {
  SpinHamiltonian h(j.at("n_sites").get<std::size_t>());
  for (const auto& t : j.at("terms")) {
    PauliString p;
    p.coefficient = t.at("coefficient_hz").get<double>() * kTwoPi;
    for (const auto& [site, axis] : t.at("paulis").items()) {
      const auto name = axis.get<std::string>();
      if (name.size() != 1) throw std::invalid_argument("Pauli axis must be one of x|y|z");
      p.factors.emplace(static_cast<std::size_t>(std::stoul(site)), parse_axis(name[0]));
    }
    h.add(std::move(p));
  }
  return h;
}

}  // namespace dqs
