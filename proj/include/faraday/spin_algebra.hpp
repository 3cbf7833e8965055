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

#pragma once

// Collective-spin Hilbert space of dimension 2J+1. All matrices use the F_z
// eigenbasis ordered by descending eigenvalue: index i <-> m = J - i.

#include <complex>
#include <functional>

#include <Eigen/Dense>
#include <json.hpp>

namespace faraday {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using SpinOperator = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Eigenvalue floor used when validating density matrices.
inline constexpr double kPositivityFloor = 1e-9;

/// Spin magnitude J stored as the integer 2J.
class SpinSpace {
 public:
  static SpinSpace from_twice_j(int twice_j);
  /// Accepts J as a real number; it must be a positive half-integer.
  static SpinSpace from_j(double j);

  int twice_j() const noexcept { return twice_j_; }
  double j() const noexcept { return 0.5 * twice_j_; }
  int dim() const noexcept { return twice_j_ + 1; }
  /// F_z eigenvalue of basis index i.
  double m(int index) const noexcept { return j() - index; }
  /// Diagonal of F_z as a real vector.
  RealVector fz_diagonal() const;

  friend bool operator==(const SpinSpace&, const SpinSpace&) = default;

 private:
  explicit SpinSpace(int twice_j) : twice_j_(twice_j) {}
  int twice_j_;
};

struct SpinOps {
  SpinOperator fx;
  SpinOperator fy;
  SpinOperator fz;
};

/// Angular momentum matrices with the Condon-Shortley phase convention.
SpinOps make_spin_ops(const SpinSpace& space);

/// Applies g to the diagonal of A. Throws DomainError if A is not diagonal
/// with a real diagonal.
SpinOperator op_function(const std::function<double(double)>& g, const SpinOperator& a);

struct LOperators {
  SpinOperator xi;   // cos(kF_z) + sin(kF_z)
  SpinOperator eta;  // cos(kF_z) - sin(kF_z)
};

LOperators l_xi_eta(const SpinSpace& space, double kappa);

/// Positive semidefinite operator on the spin space. `normalized` marks a
/// unit-trace state; unnormalized states are allowed any positive trace.
class DensityState {
 public:
  /// Validates hermiticity, the eigenvalue floor and (if normalized) the
  /// unit trace. Throws DomainError on violation.
  static DensityState make(Matrix rho, bool normalized = true);

  static DensityState coherent_x(const SpinSpace& space);
  static DensityState fz_eigenstate(const SpinSpace& space, int index);
  static DensityState maximally_mixed(const SpinSpace& space);

  const Matrix& matrix() const noexcept { return rho_; }
  bool normalized() const noexcept { return normalized_; }
  int dim() const noexcept { return static_cast<int>(rho_.rows()); }

  Complex expect(const SpinOperator& x) const { return (rho_ * x).trace(); }
  double trace() const { return rho_.trace().real(); }
  double purity() const;
  double min_eigenvalue() const;
  /// Diagonal of rho in the F_z basis.
  RealVector populations() const { return rho_.diagonal().real(); }

 private:
  DensityState(Matrix rho, bool normalized) : rho_(std::move(rho)), normalized_(normalized) {}
  Matrix rho_;
  bool normalized_;
};

/// Pure x-polarized coherent spin state |J, m_x = J><J, m_x = J|.
inline DensityState coherent_x_state(const SpinSpace& space) { return DensityState::coherent_x(space); }

/// Unitary exp(-i theta A) for self-adjoint A.
Matrix unitary_exp(const SpinOperator& a, double theta);

/// Eigen-projection: clips eigenvalues below zero and rescales to the
/// original trace.
Matrix project_to_positive(const Matrix& rho);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_hermitian_eigenvalue(const Matrix& rho);

// Row-major complex pairs: [[[re, im], ...], ...].
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace faraday
