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

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dqs {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised for shape, index and tensor-structure violations.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input violates a physical invariant (non-Hermitian
/// generator, unnormalized state, negative populations, ...).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by integrators and solvers when the numerics break down.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultDimensionCap = 4096;

/// Ordered tensor product of subsystems. Subsystem 0 is the leftmost
/// Kronecker factor, so its index is the most significant digit of a
/// basis label. Every module uses this convention.
class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<std::size_t> dims,
                        std::size_t cap = kDefaultDimensionCap);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t subsystems() const { return dims_.size(); }
  std::size_t dim(std::size_t subsystem) const { return dims_.at(subsystem); }
  std::size_t total() const { return total_; }

  /// Digits of a flat basis index, one per subsystem.
  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index(std::span<const std::size_t> digits) const;

  bool operator==(const HilbertSpace& other) const { return dims_ == other.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Pure state vector or density matrix over an explicit HilbertSpace.
class QuantumState {
 public:
  enum class Kind { Pure, Density };

  /// Validates ||psi|| = 1 within `norm_tol`.
  static QuantumState pure(HilbertSpace space, ComplexVector psi, double norm_tol = 1e-10);

  /// Validates unit trace, Hermiticity and eigenvalues >= -`eig_tol`.
  static QuantumState density(HilbertSpace space, ComplexMatrix rho, double trace_tol = 1e-10,
                              double eig_tol = 1e-8);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::Pure; }
  const HilbertSpace& space() const { return space_; }
  const ComplexVector& vector() const;
  const ComplexMatrix& matrix() const;

  /// |psi><psi| for pure states, a copy otherwise.
  QuantumState to_density() const;

 private:
  QuantumState(HilbertSpace space, Kind kind) : space_(std::move(space)), kind_(kind) {}

  HilbertSpace space_;
  Kind kind_;
  ComplexVector psi_;
  ComplexMatrix rho_;
};

enum class Axis { X, Y, Z };

char axis_name(Axis axis);
Axis parse_axis(char c);

// Elementary operators. Spin-1/2 matrices are written in the (up, down)
// basis with sigma_z = diag(1, -1).
ComplexMatrix identity(std::size_t d);
ComplexMatrix pauli(Axis axis);
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
/// Truncated bosonic annihilation operator, a[i, i+1] = sqrt(i+1).
ComplexMatrix annihilation(std::size_t d);
/// |i><i+1| on a d-level system.
ComplexMatrix ladder(std::size_t d, std::size_t i);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t cap = kDefaultDimensionCap);

/// Lifts `op` acting on the listed subsystems (strictly increasing) to the
/// full space; identity on every other factor.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> sites,
                    const HilbertSpace& space);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

/// exp(-i h t) by Hermitian eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);

/// Ascending eigenvalues of a Hermitian matrix.
RealVector hermitian_eigenvalues(const ComplexMatrix& h);

/// Re <psi|rho|psi>, clamped below at 0.
double state_fidelity(const QuantumState& rho, const QuantumState& psi);

ComplexMatrix partial_trace(const ComplexMatrix& rho, const HilbertSpace& space,
                            std::span<const std::size_t> keep);
QuantumState partial_trace(const QuantumState& rho, std::span<const std::size_t> keep);

/// Tr(rho op) or <psi|op|psi>; op must be Hermitian.
double expectation(const QuantumState& state, const ComplexMatrix& op);

}  // namespace dqs
