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

// Quantum stochastic differentials with operator-valued coefficients.
//
// An expression  sum_b C_b dM_b  is stored by its coefficients on the basis
// increments dt, dA^i, dA^{i*}, dLambda^{ij} with polarization labels i, j in
// {x, y}. Coefficients are spin operators evaluated at a fixed time t; the
// drive value f(t) is recorded alongside. Views in the circular (+, -) and
// 45-degree (xi, eta) polarization bases are derived on demand.

#include <array>
#include <complex>
#include <string>
#include <string_view>

#include "faraday/model.hpp"
#include "faraday/spin_algebra.hpp"

namespace faraday::ito {

enum class Channel : int { x = 0, y = 1 };

enum class Increment : int {
  dt = 0,
  annihilation_x,
  annihilation_y,
  creation_x,
  creation_y,
  gauge_xx,
  gauge_xy,
  gauge_yx,
  gauge_yy,
};

inline constexpr int kIncrementCount = 9;

Increment annihilation(int channel);
Increment creation(int channel);
Increment gauge(int row, int col);

enum class ChannelBasis { xy, circular, xi_eta };

ChannelBasis parse_basis(std::string_view name);
std::string_view basis_name(ChannelBasis basis);
/// Labels of the two channels in a basis, e.g. {"+", "-"}.
std::array<std::string_view, 2> channel_labels(ChannelBasis basis);
/// Human-readable label of an increment in the given basis, e.g. "dLambda^{xi eta}".
std::string increment_label(Increment inc, ChannelBasis basis = ChannelBasis::xy);

class QNoiseExpr {
 public:
  /// The zero expression on a dim-dimensional spin space.
  explicit QNoiseExpr(int dim, double t = 0.0, Complex drive = 0.0);

  int dim() const noexcept { return dim_; }
  double time() const noexcept { return t_; }
  Complex drive() const noexcept { return drive_; }

  const SpinOperator& operator[](Increment inc) const { return coeff_[static_cast<int>(inc)]; }
  SpinOperator& operator[](Increment inc) { return coeff_[static_cast<int>(inc)]; }

  /// Adds c * dM to the expression.
  QNoiseExpr& add(Increment inc, const SpinOperator& c);
  QNoiseExpr& add(Increment inc, Complex scalar);

  QNoiseExpr operator+(const QNoiseExpr& other) const;
  QNoiseExpr operator-(const QNoiseExpr& other) const;
  QNoiseExpr operator*(Complex scalar) const;

  /// dA <-> dA*, dLambda^{ij} <-> dLambda^{ji}, coefficients adjointed.
  QNoiseExpr adjoint() const;

  /// Frobenius norm of the coefficient on one increment.
  double norm(Increment inc) const;
  double max_norm() const;
  bool is_zero(double tol = 0.0) const { return max_norm() <= tol; }

 private:
  int dim_;
  double t_;
  Complex drive_;
  std::array<SpinOperator, kIncrementCount> coeff_;
};

/// Product dX dY under the Hudson-Parthasarathy table:
///   dA^k dA^{i*} = delta_ki dt          dA^k dLambda^{ij} = delta_ki dA^j
///   dLambda^{kl} dA^{i*} = delta_li dA^{k*}
///   dLambda^{kl} dLambda^{ij} = delta_li dLambda^{kj}
/// and every other product vanishes. Coefficients multiply in order.
QNoiseExpr ito_product(const QNoiseExpr& x, const QNoiseExpr& y);

/// Coefficients of an expression relabelled in another polarization basis.
struct BasisView {
  ChannelBasis basis = ChannelBasis::xy;
  SpinOperator time;
  std::array<SpinOperator, 2> annihilation;
  std::array<SpinOperator, 2> creation;
  std::array<std::array<SpinOperator, 2>, 2> gauge;

  static BasisView zero(ChannelBasis basis, int dim);
};

/// Re-expresses the expression on the increments of `target`.
BasisView basis_change(const QNoiseExpr& expr, ChannelBasis target);
BasisView basis_change(const QNoiseExpr& expr, std::string_view target);
/// Builds the (xy-stored) expression whose view in `view.basis` is `view`.
QNoiseExpr from_view(const BasisView& view, double t = 0.0, Complex drive = 0.0);

enum class Generator { U0, U, Uprime, Weyl, WeylAdjoint, Vprime, V, Ubar };

Generator parse_generator(std::string_view name);
std::string_view generator_name(Generator g);

/// G in dU = G U for the named evolution, with coefficients evaluated at t.
///
///   U0          direct Faraday scattering on the gauge processes
///   U           U0 composed with the x-channel Weyl displacement
///   Uprime      W_t U_t with W_t the adjoint Weyl process
///   Weyl        displacement W^x(f_t)
///   WeylAdjoint its adjoint process W_t
///   Vprime      Holevo-trick evolution driven by the xi/eta count outputs
///   V           homodyne Bayes evolution driven by the y-quadrature output
///   Ubar        strong-driving limit with the x-channel decoupled
QNoiseExpr qsde_coefficients(Generator name, const ModelParams& params, double t);
QNoiseExpr qsde_coefficients(std::string_view name, const ModelParams& params, double t);

/// G + G^dagger + G^dagger G: zero exactly when the evolution is unitary.
QNoiseExpr unitarity_defect(const QNoiseExpr& g);

/// Generator of U^1 U^2 given dU^1 = G^1 U^1 and dU^2 = G^2 U^2, valid when
/// U^1 commutes with the coefficients of G^2: G^1 + G^2 + G^1 G^2.
QNoiseExpr qsde_product(const QNoiseExpr& g1, const QNoiseExpr& g2);

}  // namespace faraday::ito
