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

#include "dqsim/lindblad.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace dqs {

namespace {

Eigen::SparseMatrix<cplx, Eigen::RowMajor> to_sparse(const ComplexMatrix& m) {
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> s = m.sparseView();
  s.makeCompressed();
  return s;
}

}  // namespace

LindbladIntegrator::LindbladIntegrator(const ComplexMatrix& h,
                                       const std::vector<LindbladChannel>& channels,
                                       LindbladOptions options)
    : dim_(h.rows()), options_(options) {
  if (h.rows() != h.cols()) throw DimensionError("Lindblad: Hamiltonian must be square");
  if (!is_hermitian(h)) throw InvariantError("Lindblad: Hamiltonian is not Hermitian");
  if (!(options_.dt > 0.0)) throw std::invalid_argument("Lindblad: dt must be positive");

  ComplexMatrix decay = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& ch : channels) {
    if (ch.op.rows() != dim_ || ch.op.cols() != dim_) {
      throw DimensionError("Lindblad: channel '" + ch.name + "' has the wrong shape");
    }
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
      throw InvariantError("Lindblad: channel '" + ch.name + "' has a negative or non-finite rate");
    }
    if (ch.rate == 0.0) continue;
    decay -= 0.5 * ch.rate * (ch.op.adjoint() * ch.op);
    jumps_.push_back(to_sparse(ch.op));
    rates_.push_back(ch.rate);
  }
  decay_ = to_sparse(decay);

  hamiltonian_ = to_sparse(cplx(0.0, -1.0) * h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("Lindblad: eigensolver failed for the Hamiltonian");
  energies_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

void LindbladIntegrator::dissipator_into(const ComplexMatrix& rho, ComplexMatrix& out,
                                         ComplexMatrix& scratch) const {
  // rho is Hermitian, so rho G = (G rho)^+ for the Hermitian decay operator G.
  scratch.noalias() = decay_ * rho;
  out = scratch;
  out += scratch.adjoint();
  // A rho A^+ = A (A rho)^+, keeping both products sparse * dense (dense * sparse
  // is several times slower in Eigen).
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    scratch.noalias() = jumps_[k] * rho;
    out.noalias() += rates_[k] * (jumps_[k] * scratch.adjoint());
  }
}

ComplexMatrix LindbladIntegrator::rhs(const ComplexMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("Lindblad: state shape mismatch");
  ComplexMatrix out(dim_, dim_);
  ComplexMatrix scratch(dim_, dim_);
  dissipator_into(rho, out, scratch);
  scratch.noalias() = hamiltonian_ * rho;
  out += scratch;
  out += scratch.adjoint();
  return out;
}

ComplexMatrix LindbladIntegrator::half_step_propagator(double h) const {
  ComplexVector phases(dim_);
  for (Eigen::Index k = 0; k < dim_; ++k) phases(k) = std::exp(cplx(0.0, -0.5 * h * energies_(k)));
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

std::size_t LindbladIntegrator::steps_for(double duration) const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("Lindblad: duration must be finite and non-negative");
  }
  if (duration == 0.0) return 0;
  const double ratio = duration / options_.dt;
  if (ratio > static_cast<double>(options_.max_steps)) {
    std::ostringstream os;
    os << "Lindblad: duration " << duration << " s at dt " << options_.dt << " s needs more than "
       << options_.max_steps << " steps";
    throw NumericalError(os.str());
  }
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
}

void LindbladIntegrator::check_state(const ComplexMatrix& rho, std::size_t step, double t) const {
  const double trace_err = std::abs(rho.trace() - 1.0);
  const double min_eig = hermitian_eigenvalues(rho).minCoeff();
  if (trace_err > options_.trace_tol || min_eig < -options_.positivity_tol) {
    std::ostringstream os;
    os << "Lindblad: state left the physical set at step " << step << " (t = " << t
       << " s): trace error " << trace_err << ", minimum eigenvalue " << min_eig;
    throw NumericalError(os.str());
  }
}

void LindbladIntegrator::evolve(ComplexMatrix& rho, double duration) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("Lindblad: state shape mismatch");
  const std::size_t steps = steps_for(duration);
  if (steps == 0) return;
  const double h = duration / static_cast<double>(steps);
  const ComplexMatrix u = half_step_propagator(h);
  const ComplexMatrix u_adj = u.adjoint();

  ComplexMatrix k1(dim_, dim_), k2(dim_, dim_), k3(dim_, dim_), k4(dim_, dim_);
  ComplexMatrix rho_i(dim_, dim_), stage(dim_, dim_), scratch(dim_, dim_), tmp(dim_, dim_);
  auto propagate = [&](const ComplexMatrix& in, ComplexMatrix& out) {
    tmp.noalias() = u * in;
    out.noalias() = tmp * u_adj;
  };

  const bool closed = jumps_.empty();
  const ComplexMatrix u_full = closed ? ComplexMatrix(u * u) : ComplexMatrix();
  const ComplexMatrix u_full_adj = u_full.adjoint();

  for (std::size_t s = 1; s <= steps; ++s) {
    if (closed) {
      tmp.noalias() = u_full * rho;
      rho.noalias() = tmp * u_full_adj;
    } else {
      propagate(rho, rho_i);
      dissipator_into(rho, stage, scratch);
      propagate(stage, k1);
      stage = rho_i + (0.5 * h) * k1;
      dissipator_into(stage, k2, scratch);
      stage = rho_i + (0.5 * h) * k2;
      dissipator_into(stage, k3, scratch);
      stage = rho_i + h * k3;
      propagate(stage, k4);
      dissipator_into(k4, stage, scratch);
      k4 = stage;
      stage = rho_i + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3);
      propagate(stage, rho);
      rho += (h / 6.0) * k4;
    }

    scratch = rho.adjoint();
    rho = 0.5 * (rho + scratch);

    if (options_.positivity_check_interval > 0 && s % options_.positivity_check_interval == 0 &&
        s != steps) {
      check_state(rho, s, h * static_cast<double>(s));
    }
  }
  check_state(rho, steps, duration);
}

QuantumState lindblad_evolve(const ComplexMatrix& h, const std::vector<LindbladChannel>& channels,
                             const QuantumState& rho, double duration, double dt) {
  LindbladOptions opts;
  opts.dt = dt;
  const LindbladIntegrator integrator(h, channels, opts);
  const QuantumState dens = rho.to_density();
  ComplexMatrix m = dens.matrix();
  integrator.evolve(m, duration);
  return QuantumState::density(dens.space(), std::move(m), opts.trace_tol, opts.positivity_tol);
}

}  // namespace dqs
