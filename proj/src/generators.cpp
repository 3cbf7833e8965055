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

#include "faraday/generators.hpp"

#include <cmath>
#include <string>

#include "faraday/error.hpp"

namespace faraday {
namespace {

void check_dims(const Matrix& a, const ModelParams& p, const char* where) {
  if (a.rows() != p.space.dim() || a.cols() != p.space.dim()) {
    throw DomainError(std::string(where) + ": operator dimension does not match the spin space");
  }
}

// Elementwise weights w_ij with L(X)_ij = w_ij X_ij for the dissipative part;
// valid for both pictures since every jump operator is diagonal and real.
Eigen::MatrixXd finite_alpha_weights(const ModelParams& p, double t) {
  const RealVector fz = p.space.fz_diagonal();
  const RealVector c = (p.kappa * fz).array().cos();
  const RealVector s = (p.kappa * fz).array().sin();
  const double a2 = std::pow(p.alpha_at(t), 2);
  Eigen::MatrixXd w = c * c.transpose() + s * s.transpose();
  return a2 * (w.array() - 1.0).matrix();
}

Eigen::MatrixXd limit_weights(const ModelParams& p) {
  const RealVector fz = p.space.fz_diagonal();
  const RealVector fz2 = fz.array().square();
  Eigen::MatrixXd w = fz * fz.transpose();
  w -= 0.5 * (fz2.replicate(1, fz.size()) + fz2.transpose().replicate(fz.size(), 1));
  return p.measurement_strength * w;
}

Matrix field_commutator(const Matrix& x, const ModelParams& p) {
  const SpinOperator fy = make_spin_ops(p.space).fy;
  return fy * x - x * fy;
}

}  // namespace

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "finite" || name == "finite-alpha" || name == "finite_alpha") return GeneratorKind::finite_alpha;
  if (name == "limit") return GeneratorKind::limit;
  throw DomainError("unknown generator '" + std::string(name) + "' (expected finite or limit)");
}

std::string_view generator_kind_name(GeneratorKind kind) {
  return kind == GeneratorKind::limit ? "limit" : "finite";
}

SpinOperator lindblad_heisenberg(const SpinOperator& x, const ModelParams& p, double t) {
  check_dims(x, p, "lindblad_heisenberg");
  Matrix out = (finite_alpha_weights(p, t).cast<Complex>().array() * x.array()).matrix();
  if (p.gamma_b != 0.0) out += Complex(0.0, p.gamma_b) * field_commutator(x, p);
  return out;
}

Matrix lindblad_schrodinger(const Matrix& rho, const ModelParams& p, double t) {
  check_dims(rho, p, "lindblad_schrodinger");
  Matrix out = (finite_alpha_weights(p, t).cast<Complex>().array() * rho.array()).matrix();
  if (p.gamma_b != 0.0) out -= Complex(0.0, p.gamma_b) * field_commutator(rho, p);
  return out;
}

SpinOperator limit_lindblad_heisenberg(const SpinOperator& x, const ModelParams& p) {
  check_dims(x, p, "limit_lindblad");
  if (!(p.measurement_strength >= 0.0)) throw DomainError("limit_lindblad: M must be >= 0");
  Matrix out = (limit_weights(p).cast<Complex>().array() * x.array()).matrix();
  if (p.gamma_b != 0.0) out += Complex(0.0, p.gamma_b) * field_commutator(x, p);
  return out;
}

Matrix limit_lindblad_schrodinger(const Matrix& rho, const ModelParams& p) {
  check_dims(rho, p, "limit_lindblad");
  if (!(p.measurement_strength >= 0.0)) throw DomainError("limit_lindblad: M must be >= 0");
  Matrix out = (limit_weights(p).cast<Complex>().array() * rho.array()).matrix();
  if (p.gamma_b != 0.0) out -= Complex(0.0, p.gamma_b) * field_commutator(rho, p);
  return out;
}

Matrix apply_generator(GeneratorKind kind, const Matrix& rho, const ModelParams& p, double t) {
  return kind == GeneratorKind::limit ? limit_lindblad_schrodinger(rho, p) : lindblad_schrodinger(rho, p, t);
}

std::vector<DensityState> master_evolve(const DensityState& rho0, const ModelParams& p, GeneratorKind kind) {
  p.validate();
  if (rho0.dim() != p.space.dim()) throw DomainError("master_evolve: state dimension mismatch");
  const std::size_t n = p.steps();
  const double h = p.dt;
  std::vector<DensityState> out;
  out.reserve(n + 1);
  out.push_back(rho0);
  Matrix rho = rho0.matrix() / rho0.trace();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = p.time_at(k);
    const Matrix k1 = apply_generator(kind, rho, p, t);
    const Matrix k2 = apply_generator(kind, rho + 0.5 * h * k1, p, t + 0.5 * h);
    const Matrix k3 = apply_generator(kind, rho + 0.5 * h * k2, p, t + 0.5 * h);
    const Matrix k4 = apply_generator(kind, rho + h * k3, p, t + h);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint());
    const double lowest = min_hermitian_eigenvalue(rho);
    if (lowest < -kPositivityFloor) {
      throw StepRejected("master_evolve: eigenvalue " + std::to_string(lowest) + " at t = " +
                         std::to_string(t + h) + " breaches the positivity floor; reduce dt");
    }
    if (lowest < 0.0) rho = project_to_positive(rho);
    rho /= rho.trace().real();
    out.push_back(DensityState::make(rho, true));
  }
  return out;
}

}  // namespace faraday
