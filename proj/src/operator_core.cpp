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

#include "dqsim/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dqs {

namespace {

std::string dims_string(const std::vector<std::size_t>& dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < dims.size(); ++k) os << (k ? "," : "") << dims[k];
  os << ']';
  return os.str();
}

void require_strictly_increasing(std::span<const std::size_t> sites, std::size_t n,
                                 const char* what) {
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (sites[k] >= n) {
      throw DimensionError(std::string(what) + ": subsystem index " + std::to_string(sites[k]) +
                           " out of range for " + std::to_string(n) + " subsystems");
    }
    if (k > 0 && sites[k] <= sites[k - 1]) {
      throw DimensionError(std::string(what) + ": subsystem indices must be strictly increasing");
    }
  }
}

}  // namespace

HilbertSpace::HilbertSpace(std::vector<std::size_t> dims, std::size_t cap) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("HilbertSpace needs at least one subsystem");
  for (std::size_t d : dims_) {
    if (d < 2) throw DimensionError("HilbertSpace subsystem dimension must be >= 2, got " + dims_string(dims_));
    if (total_ > cap / d) {
      throw DimensionError("HilbertSpace " + dims_string(dims_) + " exceeds dimension cap " +
                           std::to_string(cap));
    }
    total_ *= d;
  }
}

std::vector<std::size_t> HilbertSpace::digits(std::size_t index) const {
  std::vector<std::size_t> out(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    out[k] = index % dims_[k];
    index /= dims_[k];
  }
  return out;
}

std::size_t HilbertSpace::index(std::span<const std::size_t> digits) const {
  if (digits.size() != dims_.size()) throw DimensionError("digit count does not match subsystem count");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (digits[k] >= dims_[k]) throw DimensionError("digit out of range");
    idx = idx * dims_[k] + digits[k];
  }
  return idx;
}

QuantumState QuantumState::pure(HilbertSpace space, ComplexVector psi, double norm_tol) {
  if (static_cast<std::size_t>(psi.size()) != space.total()) {
    throw DimensionError("state vector length " + std::to_string(psi.size()) +
                         " does not match space dimension " + std::to_string(space.total()));
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > norm_tol) {
    throw InvariantError("pure state is not normalized: |psi| = " + std::to_string(norm));
  }
  QuantumState s(std::move(space), Kind::Pure);
  s.psi_ = std::move(psi);
  return s;
}

QuantumState QuantumState::density(HilbertSpace space, ComplexMatrix rho, double trace_tol,
                                   double eig_tol) {
  const auto n = static_cast<Eigen::Index>(space.total());
  if (rho.rows() != n || rho.cols() != n) {
    throw DimensionError("density matrix shape does not match space dimension " + std::to_string(n));
  }
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw InvariantError("density matrix trace is " + std::to_string(tr.real()) + "+" +
                         std::to_string(tr.imag()) + "i, expected 1");
  }
  if (!is_hermitian(rho, 1e-10)) throw InvariantError("density matrix is not Hermitian");
  const double min_eig = hermitian_eigenvalues(rho).minCoeff();
  if (min_eig < -eig_tol) {
    throw InvariantError("density matrix has negative eigenvalue " + std::to_string(min_eig));
  }
  QuantumState s(std::move(space), Kind::Density);
  s.rho_ = std::move(rho);
  return s;
}

const ComplexVector& QuantumState::vector() const {
  if (kind_ != Kind::Pure) throw InvariantError("state is a density matrix, not a pure state");
  return psi_;
}

const ComplexMatrix& QuantumState::matrix() const {
  if (kind_ != Kind::Density) throw InvariantError("state is pure; call to_density() first");
  return rho_;
}

QuantumState QuantumState::to_density() const {
  if (kind_ == Kind::Density) return *this;
  QuantumState s(space_, Kind::Density);
  s.rho_ = psi_ * psi_.adjoint();
  return s;
}

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

Axis parse_axis(char c) {
  switch (c) {
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
    default: throw std::invalid_argument(std::string("unknown Pauli axis '") + c + "'");
  }
}

ComplexMatrix identity(std::size_t d) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

ComplexMatrix pauli(Axis axis) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (axis) {
    case Axis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::Y:
      m(0, 1) = cplx(0.0, -1.0);
      m(1, 0) = cplx(0.0, 1.0);
      break;
    case Axis::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix annihilation(std::size_t d) {
  if (d < 2) throw DimensionError("annihilation operator needs d >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
  return m;
}

ComplexMatrix ladder(std::size_t d, std::size_t i) {
  if (d < 2) throw DimensionError("ladder operator needs d >= 2");
  if (i + 1 >= d) throw DimensionError("ladder index must satisfy 0 <= i < d - 1");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = 1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap) {
  const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  if (rows > cap || cols > cap) {
    throw DimensionError("kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds dimension cap " + std::to_string(cap));
  }
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> sites,
                    const HilbertSpace& space) {
  if (sites.empty()) throw DimensionError("embed: site list is empty");
  require_strictly_increasing(sites, space.subsystems(), "embed");

  std::size_t op_dim = 1;
  for (std::size_t s : sites) op_dim *= space.dim(s);
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != op_dim) {
    throw DimensionError("embed: operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + " but the listed sites span dimension " +
                         std::to_string(op_dim));
  }

  std::vector<std::size_t> rest;
  std::vector<bool> selected(space.subsystems(), false);
  for (std::size_t s : sites) selected[s] = true;
  for (std::size_t k = 0; k < space.subsystems(); ++k) {
    if (!selected[k]) rest.push_back(k);
  }

  // Place value of each subsystem in the flat index.
  std::vector<std::size_t> stride(space.subsystems(), 1);
  for (std::size_t k = space.subsystems() - 1; k-- > 0;) stride[k] = stride[k + 1] * space.dim(k + 1);

  auto offsets = [&](const std::vector<std::size_t>& factors) {
    std::size_t count = 1;
    for (std::size_t f : factors) count *= space.dim(f);
    std::vector<std::size_t> out(count, 0);
    for (std::size_t n = 0; n < count; ++n) {
      std::size_t rem = n;
      std::size_t off = 0;
      for (std::size_t k = factors.size(); k-- > 0;) {
        off += (rem % space.dim(factors[k])) * stride[factors[k]];
        rem /= space.dim(factors[k]);
      }
      out[n] = off;
    }
    return out;
  };

  const std::vector<std::size_t> site_vec(sites.begin(), sites.end());
  const auto op_off = offsets(site_vec);
  const auto rest_off = offsets(rest);

  const auto n = static_cast<Eigen::Index>(space.total());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t r : rest_off) {
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      for (Eigen::Index j = 0; j < op.cols(); ++j) {
        const cplx v = op(i, j);
        if (v == cplx(0.0)) continue;
        out(static_cast<Eigen::Index>(r + op_off[static_cast<std::size_t>(i)]),
            static_cast<Eigen::Index>(r + op_off[static_cast<std::size_t>(j)])) = v;
      }
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double operator_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  if (!is_hermitian(h)) throw InvariantError("expm_hermitian: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  const ComplexMatrix& v = es.eigenvectors();
  ComplexVector phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

double state_fidelity(const QuantumState& rho, const QuantumState& psi) {
  if (!(rho.space() == psi.space())) throw DimensionError("state_fidelity: Hilbert spaces differ");
  const ComplexVector& v = psi.vector();
  double f = 0.0;
  if (rho.is_pure()) {
    f = std::norm(v.dot(rho.vector()));
  } else {
    f = v.dot(rho.matrix() * v).real();
  }
  return std::max(0.0, f);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const HilbertSpace& space,
                            std::span<const std::size_t> keep) {
  if (keep.empty()) throw DimensionError("partial_trace: keep list is empty");
  require_strictly_increasing(keep, space.subsystems(), "partial_trace");
  const auto n = static_cast<Eigen::Index>(space.total());
  if (rho.rows() != n || rho.cols() != n) throw DimensionError("partial_trace: matrix shape mismatch");

  std::vector<bool> kept(space.subsystems(), false);
  for (std::size_t k : keep) kept[k] = true;

  std::size_t keep_dim = 1;
  for (std::size_t k : keep) keep_dim *= space.dim(k);

  // Reduced index and traced-out index of every full basis label.
  std::vector<std::size_t> reduced(space.total());
  std::vector<std::size_t> traced(space.total());
  for (std::size_t idx = 0; idx < space.total(); ++idx) {
    const auto d = space.digits(idx);
    std::size_t r = 0;
    std::size_t t = 0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (kept[k]) {
        r = r * space.dim(k) + d[k];
      } else {
        t = t * space.dim(k) + d[k];
      }
    }
    reduced[idx] = r;
    traced[idx] = t;
  }

  const auto m = static_cast<Eigen::Index>(keep_dim);
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (std::size_t i = 0; i < space.total(); ++i) {
    for (std::size_t j = 0; j < space.total(); ++j) {
      if (traced[i] != traced[j]) continue;
      out(static_cast<Eigen::Index>(reduced[i]), static_cast<Eigen::Index>(reduced[j])) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

QuantumState partial_trace(const QuantumState& rho, std::span<const std::size_t> keep) {
  const QuantumState dens = rho.to_density();
  ComplexMatrix reduced = partial_trace(dens.matrix(), dens.space(), keep);
  std::vector<std::size_t> dims;
  for (std::size_t k : keep) dims.push_back(rho.space().dim(k));
  return QuantumState::density(HilbertSpace(std::move(dims)), std::move(reduced), 1e-8, 1e-6);
}

double expectation(const QuantumState& state, const ComplexMatrix& op) {
  const auto n = static_cast<Eigen::Index>(state.space().total());
  if (op.rows() != n || op.cols() != n) throw DimensionError("expectation: operator shape mismatch");
  if (!is_hermitian(op)) throw InvariantError("expectation: operator is not Hermitian");
  cplx value;
  if (state.is_pure()) {
    value = state.vector().dot(op * state.vector());
  } else {
    value = (state.matrix() * op).trace();
  }
  return value.real();
}

}  // namespace dqs
