// Copyright 2026 The Faraday Filter Authors
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

#include <doctest.h>

#include <cmath>

#include "faraday/error.hpp"
#include "faraday/spin_algebra.hpp"
#include "support.hpp"

using namespace faraday;
using faraday::testing::max_abs;

TEST_CASE("F_z is diagonal with descending eigenvalues") {
  const SpinOps half = make_spin_ops(SpinSpace::from_twice_j(1));
  CHECK(max_abs(half.fz - Matrix(RealVector((RealVector(2) << 0.5, -0.5).finished()).cast<Complex>().asDiagonal())) ==
        0.0);
  const SpinOps one = make_spin_ops(SpinSpace::from_j(1.0));
  CHECK(one.fz(0, 0).real() == 1.0);
  CHECK(one.fz(1, 1).real() == 0.0);
  CHECK(one.fz(2, 2).real() == -1.0);
  CHECK(max_abs(one.fz - Matrix(one.fz.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("angular momentum commutators hold up to J = 20") {
  const Complex i(0.0, 1.0);
  for (int twice_j = 1; twice_j <= 40; ++twice_j) {
    const SpinOps s = make_spin_ops(SpinSpace::from_twice_j(twice_j));
    CHECK(max_abs(s.fx * s.fy - s.fy * s.fx - i * s.fz) < 1e-12 * twice_j * twice_j);
    CHECK(max_abs(s.fy * s.fz - s.fz * s.fy - i * s.fx) < 1e-12 * twice_j * twice_j);
    CHECK(max_abs(s.fz * s.fx - s.fx * s.fz - i * s.fy) < 1e-12 * twice_j * twice_j);
    CHECK(max_abs(s.fx - s.fx.adjoint()) == 0.0);
    CHECK(max_abs(s.fy - s.fy.adjoint()) == 0.0);
  }
}

TEST_CASE("Casimir trace for J = 1 is 6") {
  const SpinOps s = make_spin_ops(SpinSpace::from_j(1.0));
  const Complex tr = (s.fx * s.fx + s.fy * s.fy + s.fz * s.fz).trace();
  CHECK(tr.real() == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(std::abs(tr.imag()) < 1e-15);
}

TEST_CASE("SpinSpace rejects invalid spins") {
  CHECK_THROWS_AS(SpinSpace::from_twice_j(0), DomainError);
  CHECK_THROWS_AS(SpinSpace::from_j(0.3), DomainError);
  CHECK(SpinSpace::from_j(1.5).dim() == 4);
}

TEST_CASE("op_function applies g to the diagonal") {
  const SpinSpace one = SpinSpace::from_j(1.0);
  const SpinOps s = make_spin_ops(one);
  const double kappa = 0.0;
  CHECK(max_abs(op_function([&](double x) { return std::cos(kappa * x); }, s.fz) - Matrix::Identity(3, 3)) == 0.0);
  const SpinOps h = make_spin_ops(SpinSpace::from_twice_j(1));
  const Matrix sn = op_function([](double x) { return std::sin(M_PI * x); }, h.fz);
  CHECK(sn(0, 0).real() == doctest::Approx(1.0));
  CHECK(sn(1, 1).real() == doctest::Approx(-1.0));
  const Matrix sq = op_function([](double x) { return x * x; }, s.fz);
  CHECK(max_abs(sq - Matrix(Eigen::Vector3cd(1, 0, 1).asDiagonal())) == 0.0);
  CHECK_THROWS_AS(op_function([](double x) { return x; }, s.fx), DomainError);
}

TEST_CASE("L operators: examples and identities") {
  const SpinSpace half = SpinSpace::from_twice_j(1);
  const LOperators l0 = l_xi_eta(half, 0.0);
  CHECK(max_abs(l0.xi - Matrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs(l0.eta - Matrix::Identity(2, 2)) == 0.0);
  const LOperators lp = l_xi_eta(half, M_PI / 2);
  CHECK(lp.xi(0, 0).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(lp.xi(1, 1)) < 1e-15);
  CHECK(std::abs(lp.eta(0, 0)) < 1e-15);
  CHECK(lp.eta(1, 1).real() == doctest::Approx(std::sqrt(2.0)));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (int twice_j = 1; twice_j <= 8; ++twice_j) {
    const SpinSpace sp = SpinSpace::from_twice_j(twice_j);
    const double kappa = u(rng);
    const LOperators l = l_xi_eta(sp, kappa);
    const int n = sp.dim();
    CHECK(max_abs(l.xi * l.xi + l.eta * l.eta - 2.0 * Matrix::Identity(n, n)) < 1e-14);
    Matrix s2(n, n);
    s2.setZero();
    for (int i = 0; i < n; ++i) s2(i, i) = 2.0 * std::sin(2.0 * kappa * sp.m(i));
    CHECK(max_abs(l.xi * l.xi - l.eta * l.eta - s2) < 1e-12);
  }
}

TEST_CASE("coherent_x: closed forms and an independent construction") {
  const SpinSpace half = SpinSpace::from_twice_j(1);
  const DensityState c = coherent_x_state(half);
  CHECK(max_abs(c.matrix() - 0.5 * Matrix::Ones(2, 2)) < 1e-15);
  const SpinOps sh = make_spin_ops(half);
  CHECK(std::abs(c.expect(sh.fz)) < 1e-15);

  for (int twice_j = 1; twice_j <= 8; ++twice_j) {
    const SpinSpace sp = SpinSpace::from_twice_j(twice_j);
    const SpinOps s = make_spin_ops(sp);
    const DensityState rho = coherent_x_state(sp);
    // Oracle: projector on the top eigenvector of F_x.
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.fx);
    const Eigen::VectorXcd v = es.eigenvectors().col(sp.dim() - 1);
    CHECK(es.eigenvalues()(sp.dim() - 1) == doctest::Approx(sp.j()));
    CHECK(max_abs(rho.matrix() - v * v.adjoint()) < 1e-12);
    CHECK(rho.expect(s.fx).real() == doctest::Approx(sp.j()).epsilon(1e-13));
    CHECK(rho.expect(s.fz * s.fz).real() == doctest::Approx(sp.j() / 2).epsilon(1e-13));
    const Matrix r = unitary_exp(s.fx, 0.37);
    CHECK(max_abs(r * rho.matrix() * r.adjoint() - rho.matrix()) < 1e-12);
  }
}

TEST_CASE("DensityState validation") {
  Matrix bad(2, 2);
  bad << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(DensityState::make(bad), DomainError);
  Matrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityState::make(neg), DomainError);
  Matrix two = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityState::make(two, true), DomainError);
  CHECK_NOTHROW(DensityState::make(two, false));
  CHECK(DensityState::maximally_mixed(SpinSpace::from_j(1.0)).purity() == doctest::Approx(1.0 / 3));
  const DensityState e = DensityState::fz_eigenstate(SpinSpace::from_j(1.0), 2);
  CHECK(e.populations()(2) == 1.0);
}

TEST_CASE("matrix JSON round trip uses row-major complex pairs") {
  std::mt19937_64 rng(3);
  const Matrix m = faraday::testing::random_matrix(3, rng);
  const nlohmann::json j = matrix_to_json(m);
  CHECK(j.size() == 3);
  CHECK(j[0][1][0].get<double>() == m(0, 1).real());
  CHECK(j[0][1][1].get<double>() == m(0, 1).imag());
  CHECK(max_abs(matrix_from_json(j) - m) == 0.0);
}

TEST_CASE("project_to_positive clips negative eigenvalues and keeps the trace") {
  Matrix m(2, 2);
  m << 1.1, 0.0, 0.0, -0.1;
  const Matrix p = project_to_positive(m);
  CHECK(min_hermitian_eigenvalue(p) >= 0.0);
  CHECK(p.trace().real() == doctest::Approx(1.0));
}
