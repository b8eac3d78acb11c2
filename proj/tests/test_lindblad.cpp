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
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "dqsim/lindblad.hpp"
#include "dqsim/model_hamiltonians.hpp"
#include "oracles.hpp"

using namespace oracle;

namespace {

Mat lowering() { return mat2(0, 0, 1, 0); }  // |down><up|

Mat excited_state() { return mat2(1, 0, 0, 0); }

// Row-major vectorization: vec(A X B) = (A kron B^T) vec(X).
Mat liouvillian(const Mat& h, const std::vector<std::pair<Mat, double>>& channels) {
  const auto d = static_cast<std::size_t>(h.rows());
  const Mat one = id(d);
  Mat l = -I * (naive_kron(h, one) - naive_kron(one, h.transpose()));
  for (const auto& [a, rate] : channels) {
    const Mat ada = a.adjoint() * a;
    l += rate * (naive_kron(a, a.conjugate()) - 0.5 * naive_kron(ada, one) - 0.5 * naive_kron(one, ada.transpose()));
  }
  return l;
}

Mat liouville_evolve(const Mat& l, const Mat& rho, double t) {
  const auto d = rho.rows();
  Vec v(d * d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) v(r * d + c) = rho(r, c);
  // exp(L t) = exp(-i (i L) t).
  const Vec w = taylor_expm(I * l, t) * v;
  Mat out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) out(r, c) = w(r * d + c);
  return out;
}

std::vector<dqs::LindbladChannel> to_channels(const std::vector<std::pair<Mat, double>>& c) {
  std::vector<dqs::LindbladChannel> out;
  for (const auto& [a, rate] : c) out.push_back({a, rate, "c"});
  return out;
}

}  // namespace

TEST_CASE("amplitude damping follows exp(-Gamma t)") {
  const double gamma = dqs::angular(20e3);
  dqs::LindbladOptions opt;
  opt.dt = 1e-7;
  const dqs::LindbladIntegrator integ(Mat::Zero(2, 2), {{lowering(), gamma, "decay"}}, opt);
  for (double t : {1e-6, 5e-6, 2e-5}) {
    Mat rho = excited_state();
    integ.evolve(rho, t);
    const double expected = std::exp(-gamma * t);
    CHECK(std::abs(rho(0, 0).real() - expected) / expected < 1e-4);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
  }
}

TEST_CASE("pure dephasing: coherence decays as exp(-2 Gamma_phi t) and precesses") {
  const double gphi = dqs::angular(20e3);
  const double omega = dqs::angular(1e6);
  dqs::LindbladOptions opt;
  opt.dt = 1e-9;
  const Mat h = 0.5 * omega * sz();
  const dqs::LindbladIntegrator integ(h, {{sz(), gphi, "dephasing"}}, opt);
  const double t = 3e-6;
  Mat rho = 0.5 * mat2(1, 1, 1, 1);
  integ.evolve(rho, t);
  const cplx expected = 0.5 * std::exp(cplx(-2.0 * gphi * t, -omega * t));
  CHECK(std::abs(rho(0, 1) - expected) / std::abs(expected) < 1e-4);
  CHECK(std::abs(rho(0, 0).real() - 0.5) < 1e-12);
}

TEST_CASE("zero-noise limit is unitary evolution") {
  std::mt19937_64 rng(7);
  const Mat h = dqs::angular(10e6) * random_hermitian(6, rng);
  const Vec psi = random_state(6, rng);
  Mat rho = psi * psi.adjoint();
  const double t = 100e-9;
  dqs::LindbladOptions opt;
  opt.dt = 2e-12;
  dqs::LindbladIntegrator(h, {}, opt).evolve(rho, t);
  const Vec exact = taylor_expm(h, t) * psi;
  const double f = (exact.adjoint() * rho * exact)(0, 0).real();
  CHECK(f > 1.0 - 1e-6);
  // Zero-rate channels are dropped, not integrated.
  Mat rho2 = psi * psi.adjoint();
  dqs::LindbladIntegrator(h, {{id(6), 0.0, "off"}}, opt)
      .evolve(rho2, t);
  CHECK((rho2 - rho).norm() < 1e-10);
}

TEST_CASE("matches the exponential of the Liouvillian") {
  std::mt19937_64 rng(11);
  const std::size_t d = 4;
  const Mat h = dqs::angular(5e6) * random_hermitian(d, rng);
  std::vector<std::pair<Mat, double>> ch;
  for (int k = 0; k < 2; ++k) {
    Mat a = random_hermitian(d, rng) + I * random_hermitian(d, rng);
    ch.emplace_back(a, dqs::angular(0.5e6));
  }
  const Mat rho0 = random_density(d, rng);
  const double t = 200e-9;
  dqs::LindbladOptions opt;
  opt.dt = 1e-10;
  Mat rho = rho0;
  dqs::LindbladIntegrator(h, to_channels(ch), opt).evolve(rho, t);
  const Mat ref = liouville_evolve(liouvillian(h, ch), rho0, t);
  CHECK((rho - ref).norm() < 1e-8);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
  CHECK((rho - rho.adjoint()).norm() < 1e-14);
}

TEST_CASE("rhs agrees with the Liouvillian and is traceless") {
  std::mt19937_64 rng(3);
  const std::size_t d = 3;
  const Mat h = random_hermitian(d, rng);
  std::vector<std::pair<Mat, double>> ch = {{random_hermitian(d, rng) + I * random_hermitian(d, rng), 0.7}};
  const Mat rho = random_density(d, rng);
  const dqs::LindbladIntegrator integ(h, to_channels(ch));
  const Mat got = integ.rhs(rho);
  const Mat l = liouvillian(h, ch);
  Vec v(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) v(static_cast<Eigen::Index>(r * d + c)) = rho(r, c);
  const Vec w = l * v;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) CHECK(std::abs(got(r, c) - w(static_cast<Eigen::Index>(r * d + c))) < 1e-12);
  CHECK(std::abs(got.trace()) < 1e-12);
}

TEST_CASE("halving dt changes the result at fourth order") {
  std::mt19937_64 rng(5);
  const Mat h = dqs::angular(50e6) * random_hermitian(3, rng);
  std::vector<std::pair<Mat, double>> ch = {{random_hermitian(3, rng) + I * random_hermitian(3, rng), 3e7}};
  const Mat rho0 = random_density(3, rng);
  const Mat ref = liouville_evolve(liouvillian(h, ch), rho0, 50e-9);
  auto run = [&](double dt) {
    dqs::LindbladOptions opt;
    opt.dt = dt;
    Mat rho = rho0;
    dqs::LindbladIntegrator(h, to_channels(ch), opt).evolve(rho, 50e-9);
    return (rho - ref).norm();
  };
  const double e1 = run(4e-10), e2 = run(2e-10);
  CHECK(e1 > 0.0);
  CHECK(e1 / e2 > 10.0);
}

TEST_CASE("step count covers the duration") {
  dqs::LindbladOptions opt;
  opt.dt = 1e-9;
  const dqs::LindbladIntegrator integ(Mat::Zero(2, 2), {}, opt);
  CHECK(integ.steps_for(0.0) == 0);
  CHECK(integ.steps_for(1e-9) == 1);
  CHECK(integ.steps_for(1.5e-9) == 2);
  CHECK(integ.steps_for(10e-9) == 10);
  CHECK_THROWS_AS(integ.steps_for(-1.0), std::invalid_argument);
}

TEST_CASE("failures are reported") {
  dqs::LindbladOptions opt;
  opt.dt = 1e-12;
  opt.max_steps = 100;
  const dqs::LindbladIntegrator integ(sz(), {}, opt);
  Mat rho = excited_state();
  CHECK_THROWS_AS(integ.evolve(rho, 1e-6), dqs::NumericalError);
  CHECK_THROWS_AS(dqs::LindbladIntegrator(mat2(0, 1, 0, 0), {}), dqs::InvariantError);
  CHECK_THROWS_AS(dqs::LindbladIntegrator(sz(), {{lowering(), -1.0, "bad"}}), dqs::InvariantError);
  CHECK_THROWS_AS(dqs::LindbladIntegrator(sz(), {{id(3), 1.0, "bad"}}), dqs::DimensionError);
  Mat wrong = id(3);
  CHECK_THROWS_AS(dqs::LindbladIntegrator(sz(), {}).evolve(wrong, 1e-9), dqs::DimensionError);
}

TEST_CASE("lindblad_evolve returns a valid density matrix") {
  const auto space = dqs::HilbertSpace({2});
  Vec up(2);
  up << 1, 0;
  const auto rho = dqs::lindblad_evolve(Mat::Zero(2, 2), {{lowering(), 1e6, "decay"}},
                                        dqs::QuantumState::pure(space, up), 1e-6, 1e-9);
  CHECK(!rho.is_pure());
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}
