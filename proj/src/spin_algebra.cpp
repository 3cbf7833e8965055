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

#include "faraday/spin_algebra.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "faraday/error.hpp"

namespace faraday {

SpinSpace SpinSpace::from_twice_j(int twice_j) {
  if (twice_j < 1) {
    throw DomainError("spin space: 2J must be a positive integer, got " + std::to_string(twice_j));
  }
  return SpinSpace(twice_j);
}

SpinSpace SpinSpace::from_j(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-12 || rounded < 1.0) {
    throw DomainError("spin space: J must be a positive half-integer, got " + std::to_string(j));
  }
  return SpinSpace(static_cast<int>(rounded));
}

RealVector SpinSpace::fz_diagonal() const {
  RealVector d(dim());
  for (int i = 0; i < dim(); ++i) d(i) = m(i);
  return d;
}

SpinOps make_spin_ops(const SpinSpace& space) {
  const int n = space.dim();
  const double j = space.j();
  // F_+ |m> = sqrt(J(J+1) - m(m+1)) |m+1>; |m+1> sits one index above |m>.
  Matrix raise = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double m = space.m(i);
    raise(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Matrix lower = raise.adjoint();
  SpinOps ops;
  ops.fx = 0.5 * (raise + lower);
  ops.fy = Complex(0.0, -0.5) * (raise - lower);
  ops.fz = space.fz_diagonal().cast<Complex>().asDiagonal();
  return ops;
}

SpinOperator op_function(const std::function<double(double)>& g, const SpinOperator& a) {
  if (a.rows() != a.cols()) throw DomainError("op_function: operator is not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  Matrix off = a;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-14 * scale) {
    throw DomainError("op_function: operator is not diagonal in the F_z basis");
  }
  if (a.diagonal().imag().cwiseAbs().maxCoeff() > 1e-14 * scale) {
    throw DomainError("op_function: diagonal is not real");
  }
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, i) = g(a(i, i).real());
  return out;
}

LOperators l_xi_eta(const SpinSpace& space, double kappa) {
  if (!std::isfinite(kappa)) throw DomainError("l_xi_eta: kappa must be finite");
  const RealVector fz = space.fz_diagonal();
  const RealVector c = (kappa * fz).array().cos();
  const RealVector s = (kappa * fz).array().sin();
  LOperators l;
  l.xi = (c + s).cast<Complex>().asDiagonal();
  l.eta = (c - s).cast<Complex>().asDiagonal();
  return l;
}

Matrix unitary_exp(const SpinOperator& a, double theta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  const Eigen::VectorXcd phases =
      (es.eigenvalues() * (-theta)).unaryExpr([](double x) { return std::polar(1.0, x); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double min_hermitian_eigenvalue(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix project_to_positive(const Matrix& rho) {
  const Matrix h = 0.5 * (rho + rho.adjoint());
  const double tr = h.trace().real();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const RealVector clipped = es.eigenvalues().cwiseMax(0.0);
  Matrix out = es.eigenvectors() * clipped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  const double new_tr = out.trace().real();
  if (new_tr <= 0.0) throw InvariantError("positivity projection produced a zero state");
  return out * (tr / new_tr);
}

DensityState DensityState::make(Matrix rho, bool normalized) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) {
    throw DomainError("density state: matrix must be square with dimension >= 2");
  }
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError("density state: matrix is not self-adjoint");
  }
  rho = 0.5 * (rho + rho.adjoint());
  const double tr = rho.trace().real();
  if (normalized && std::abs(tr - 1.0) > 1e-10) {
    throw DomainError("density state: trace " + std::to_string(tr) + " != 1");
  }
  if (!(tr > 0.0)) throw DomainError("density state: trace must be positive");
  if (min_hermitian_eigenvalue(rho) < -kPositivityFloor * tr) {
    throw DomainError("density state: negative eigenvalue below the positivity floor");
  }
  return DensityState(std::move(rho), normalized);
}

DensityState DensityState::coherent_x(const SpinSpace& space) {
  const SpinOps ops = make_spin_ops(space);
  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(space.dim());
  up(0) = 1.0;
  const Eigen::VectorXcd psi = unitary_exp(ops.fy, std::numbers::pi / 2.0) * up;
  return DensityState(psi * psi.adjoint(), true);
}

DensityState DensityState::fz_eigenstate(const SpinSpace& space, int index) {
  if (index < 0 || index >= space.dim()) throw DomainError("fz_eigenstate: index out of range");
  Matrix rho = Matrix::Zero(space.dim(), space.dim());
  rho(index, index) = 1.0;
  return DensityState(std::move(rho), true);
}

DensityState DensityState::maximally_mixed(const SpinSpace& space) {
  return DensityState(Matrix::Identity(space.dim(), space.dim()) / static_cast<double>(space.dim()), true);
}

double DensityState::purity() const { return rho_.cwiseAbs2().sum() / (trace() * trace()); }

double DensityState::min_eigenvalue() const { return min_hermitian_eigenvalue(rho_); }

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("matrix json: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DomainError("matrix json: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& z = row.at(c);
      if (!z.is_array() || z.size() != 2) throw DomainError("matrix json: entries must be [re, im] pairs");
      m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace faraday
