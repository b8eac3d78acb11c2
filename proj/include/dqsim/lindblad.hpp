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
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "dqsim/operator_core.hpp"

namespace dqs {

/// Dissipator term rate * L(op), L(A) rho = (2 A rho A^+ - A^+ A rho - rho A^+ A) / 2.
struct LindbladChannel {
  ComplexMatrix op;
  double rate = 0.0;
  std::string name;
};

struct LindbladOptions {
  double dt = 2e-12;
  std::size_t max_steps = 20'000'000;
  /// Minimum-eigenvalue check cadence, in steps. The final state is always checked.
  std::size_t positivity_check_interval = 10'000;
  double positivity_tol = 1e-6;
  double trace_tol = 1e-8;
};

/// Fixed-step integrator for d rho / dt = -i[H, rho] + sum_k rate_k L(A_k) rho.
///
/// Fourth-order Runge-Kutta in the interaction picture of H (RK4IP): the
/// Hamiltonian part is propagated exactly with exp(-i H dt / 2), RK4 handles
/// the dissipator. With all rates zero a run reduces to exact unitary
/// evolution. The step is dt, shortened uniformly so that an integer number
/// of steps covers the requested duration. rho is re-symmetrized after every
/// step.
class LindbladIntegrator {
 public:
  LindbladIntegrator(const ComplexMatrix& h, const std::vector<LindbladChannel>& channels,
                     LindbladOptions options = {});

  /// Evolves rho in place for `duration` seconds. Throws NumericalError if the
  /// step budget is exceeded, the trace drifts or positivity is lost.
  void evolve(ComplexMatrix& rho, double duration) const;

  /// d rho / dt at a Hermitian rho.
  ComplexMatrix rhs(const ComplexMatrix& rho) const;

  std::size_t steps_for(double duration) const;
  const LindbladOptions& options() const { return options_; }

 private:
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  void dissipator_into(const ComplexMatrix& rho, ComplexMatrix& out, ComplexMatrix& scratch) const;
  ComplexMatrix half_step_propagator(double h) const;
  void check_state(const ComplexMatrix& rho, std::size_t step, double t) const;

  Eigen::Index dim_;
  Sparse hamiltonian_;  // -i H
  RealVector energies_;
  ComplexMatrix eigenvectors_;
  Sparse decay_;  // -(1/2) sum rate A^+ A
  std::vector<Sparse> jumps_;
  std::vector<double> rates_;
  LindbladOptions options_;
};

QuantumState lindblad_evolve(const ComplexMatrix& h, const std::vector<LindbladChannel>& channels,
                             const QuantumState& rho, double duration, double dt);

}  // namespace dqs
