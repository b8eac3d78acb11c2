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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "dqsim/dynamics.hpp"
#include "oracles.hpp"
#include "sequence_oracle.hpp"

using namespace oracle;
using dqs::Boundary;

namespace {

constexpr double kPi = std::numbers::pi;

dqs::HilbertSpace qubits(std::size_t n) { return dqs::HilbertSpace(std::vector<std::size_t>(n, 2)); }

}  // namespace

TEST_CASE("evolve_unitary against a Taylor oracle") {
  std::mt19937_64 rng(21);
  const Mat h = random_hermitian(8, rng);
  const Vec psi = random_state(8, rng);
  const auto out = dqs::evolve_unitary(h, 0.8, dqs::QuantumState::pure(qubits(3), psi));
  CHECK((out.vector() - taylor_expm(h, 0.8) * psi).norm() < 1e-10);

  const Mat rho = random_density(8, rng);
  const auto outd = dqs::evolve_unitary(h, 0.8, dqs::QuantumState::density(qubits(3), rho));
  const Mat u = taylor_expm(h, 0.8);
  CHECK((outd.matrix() - u * rho * u.adjoint()).norm() < 1e-10);
  CHECK_THROWS_AS(dqs::evolve_unitary(id(4), 1.0, dqs::QuantumState::pure(qubits(3), psi)), dqs::DimensionError);
}

TEST_CASE("gate and sequence unitaries match the literal-matrix oracle") {
  const std::vector<dqs::GateSequence> seqs = {
      dqs::compile_heisenberg_pair(0.7), dqs::compile_ising_frustrated(0.4),
      dqs::compile_heisenberg_chain(4, 0.9, 2, Boundary::Periodic), dqs::compile_tfim(3, 0.5, -0.3, 2, Boundary::Open)};
  for (const auto& seq : seqs) {
    for (const auto& g : seq.gates) CHECK((dqs::gate_unitary(g, seq.n_sites) - gate_matrix(g, seq.n_sites)).norm() < 1e-12);
    CHECK((dqs::sequence_unitary(seq) - sequence_matrix(seq)).norm() < 1e-11);
  }
  // Reversed pair order gives the same gate.
  const auto a = dqs::Gate::xy(0, 2, 0.3, 0.0), b = dqs::Gate::xy(2, 0, 0.3, 0.0);
  CHECK((dqs::gate_unitary(a, 3) - dqs::gate_unitary(b, 3)).norm() < 1e-14);
}

TEST_CASE("run_sequence_ideal") {
  const auto seq = dqs::compile_heisenberg_pair(kPi / 4);
  const auto psi = dqs::qubit_product_state({{1.0, 2.0}, {0.0, 1.0}});
  const auto run = dqs::run_sequence_ideal(seq, psi);
  const Vec expected = taylor_expm(heisenberg_dense(2, 1.0, false), kPi / 4) * psi.vector();
  CHECK((run.state.vector() - expected).norm() < 1e-10);
  CHECK(run.state.is_pure());
  const auto rho = dqs::run_sequence_ideal(seq, psi.to_density());
  CHECK((rho.state.matrix() - expected * expected.adjoint()).norm() < 1e-10);
  CHECK_THROWS_AS(dqs::run_sequence_ideal(seq, dqs::spin_product_state("uuu")), dqs::DimensionError);
}

TEST_CASE("protocol families target their reference Hamiltonians") {
  CHECK((dqs::heisenberg_pair_family().reference.dense() - heisenberg_dense(2, 1.0, false)).norm() < 1e-14);
  CHECK((dqs::heisenberg_chain_family(4, Boundary::Periodic).reference.dense() - heisenberg_dense(4, 1.0, true))
            .norm() < 1e-14);
  CHECK((dqs::ising_frustrated_family().reference.dense() - tfim_dense(3, 1.0, 0.0, true)).norm() < 1e-14);
  CHECK((dqs::tfim_family(3, 0.5, Boundary::Open).reference.dense() - tfim_dense(3, 1.0, 0.5, false)).norm() <
        1e-14);
  const auto fam = dqs::tfim_family(3, 0.5, Boundary::Open);
  const auto seq = fam.compile(0.4, 2);
  CHECK(seq.metadata.theta_b == doctest::Approx(0.2));
}

TEST_CASE("digital error curve agrees with a direct oracle computation") {
  const auto fam = dqs::heisenberg_chain_family(3, Boundary::Open);
  const std::vector<double> grid = {0.0, 0.1, 0.4, kPi / 4};
  const std::vector<std::size_t> ls = {1, 3};
  const auto psi = dqs::spin_product_state("udu");
  const auto table = dqs::digital_error_curve(fam, grid, ls, psi, 1);
  const Mat h = heisenberg_dense(3, 1.0, false);
  for (std::size_t k = 0; k < ls.size(); ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec digital = sequence_matrix(fam.compile(grid[i], ls[k])) * psi.vector();
      const Vec exact = taylor_expm(h, grid[i]) * psi.vector();
      const double expected = std::max(0.0, 1.0 - std::norm(exact.dot(digital)));
      CHECK(std::abs(table.loss[k][i] - expected) < 1e-12);
    }
  }
  CHECK(table.loss[0][0] < 1e-13);
  CHECK(table.loss[1][0] < 1e-13);
}

TEST_CASE("digital error curve is independent of the thread count") {
  const auto fam = dqs::tfim_family(3, 1.0, Boundary::Periodic);
  std::vector<double> grid;
  for (int i = 0; i < 17; ++i) grid.push_back(kPi / 4 * i / 16.0);
  const auto psi = dqs::spin_product_state("udu");
  const auto a = dqs::digital_error_curve(fam, grid, {2, 3}, psi, 1);
  const auto b = dqs::digital_error_curve(fam, grid, {2, 3}, psi, 4);
  CHECK(a.loss == b.loss);
}

TEST_CASE("exact protocols have zero digital error") {
  std::vector<double> grid = {0.0, 0.2, 0.5, kPi / 4};
  const auto pair = dqs::digital_error_curve(dqs::heisenberg_pair_family(), grid, {1},
                                             dqs::qubit_product_state({{1.0, 2.0}, {0.0, 1.0}}));
  const auto frus = dqs::digital_error_curve(dqs::ising_frustrated_family(), grid, {1},
                                             dqs::qubit_product_state({{1.0, 0.3}, {0.5, 1.0}, {1.0, -1.0}}));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(pair.loss[0][i] < 1e-12);
    CHECK(frus.loss[0][i] < 1e-12);
  }
}

TEST_CASE("digital error curve input checks") {
  const auto fam = dqs::heisenberg_chain_family(3, Boundary::Open);
  CHECK_THROWS_AS(dqs::digital_error_curve(fam, {0.1}, {1}, dqs::spin_product_state("ud")), dqs::DimensionError);
  CHECK_THROWS_AS(dqs::digital_error_curve(fam, {0.1}, {0}, dqs::spin_product_state("udu")), std::invalid_argument);
}

TEST_CASE("accumulated gate error") {
  CHECK(dqs::accumulated_gate_error(0.01, 3) == doctest::Approx(0.03));
  CHECK(dqs::accumulated_gate_error(0.05, 2) == doctest::Approx(0.10));
  CHECK(dqs::accumulated_gate_error(0.0, 5) == 0.0);
  CHECK_THROWS_AS(dqs::accumulated_gate_error(-0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(dqs::accumulated_gate_error(1.0, 1), std::invalid_argument);
}

TEST_CASE("product states") {
  const auto s = dqs::spin_product_state("udu");
  CHECK(s.space().total() == 8);
  // up = index 0 per site; "udu" = 0b010.
  CHECK(std::abs(s.vector()(2) - 1.0) < 1e-15);
  CHECK_THROWS_AS(dqs::spin_product_state(""), std::invalid_argument);
  CHECK_THROWS_AS(dqs::spin_product_state("uxd"), std::invalid_argument);

  const auto q = dqs::qubit_product_state({{1.0, 2.0}, {0.0, 1.0}});
  Vec expected(4);
  expected << 0.0, 1.0, 0.0, 2.0;
  expected /= std::sqrt(5.0);
  CHECK((q.vector() - expected).norm() < 1e-15);
  CHECK_THROWS_AS(dqs::qubit_product_state({{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(dqs::qubit_product_state({}), std::invalid_argument);
}
