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

// Conditional state propagation in state (pre-adjoint) form.
//
// Three observation schemes are supported: balanced polarimetry (photon
// counting in the xi/eta basis), homodyne detection of the y channel, and the
// strong-driving limit of either. Each has a normalized filter and a linear
// (unnormalized) filter. A linear state is stored as a unit-trace
// representative plus the accumulated log of its trace, so long horizons do
// not underflow.
//
// Discretization. Every jump operator and measurement coupling is diagonal in
// the F_z basis, so one step is a congruence or a Schur product with a
// positive semidefinite weight matrix, followed (normalized mode) by a trace
// rescale:
//   polarimetry  drift over dt, then at most one jump L^a rho L^a
//   diffusive    rho_ij <- rho_ij (m_i m_j + a^2 dt c_i c_j),
//                m = 1 + a s dy - a^2 dt / 2      (homodyne, s = sin(kF_z))
//                m = 1 + sqrt(M) F_z dy - M F_z^2 dt / 2   (limit)
// which reproduces the filtering equations to first order in dt with dy^2 ~ dt
// and keeps the state positive. A field term gamma_b F_y is applied as the
// exact unitary over dt before the measurement update.

#include <array>
#include <cstdint>
#include <string_view>

#include "faraday/model.hpp"
#include "faraday/spin_algebra.hpp"

namespace faraday {

enum class Scheme { polarimetry, homodyne, limit };
enum class FilterMode { normalized, linear };
enum class CountEvent : int { none = 0, xi = 1, eta = 2 };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme scheme);
FilterMode parse_mode(std::string_view name);
std::string_view mode_name(FilterMode mode);

/// Observation over one step: a count event (polarimetry) or a photocurrent
/// increment dy (homodyne and limit).
struct ObservationIncrement {
  CountEvent event = CountEvent::none;
  double dy = 0.0;
  double dt = 0.0;

  static ObservationIncrement count(CountEvent event, double dt) { return {event, 0.0, dt}; }
  static ObservationIncrement diffusive(double dy, double dt) { return {CountEvent::none, dy, dt}; }
};

struct FilterState {
  Matrix rho;  // unit-trace representative in both modes
  Scheme scheme = Scheme::polarimetry;
  FilterMode mode = FilterMode::normalized;
  double t = 0.0;
  /// log trace(sigma_t) in linear mode; the same likelihood ratio is tracked
  /// in normalized mode from the renormalization constants.
  double log_likelihood = 0.0;
  std::uint64_t steps = 0;

  static FilterState start(const DensityState& rho0, Scheme scheme, FilterMode mode);
  /// sigma_t = exp(log_likelihood) rho.
  Matrix unnormalized() const;
};

struct PolarimetryRates {
  double xi = 0.0;
  double eta = 0.0;
};

/// Innovation of one step; diffusive schemes use channel 0 only.
struct StepInnovation {
  std::array<double, 2> value{0.0, 0.0};
};

struct Moments {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
  double fz2 = 0.0;
  double var_fz = 0.0;
  double purity = 0.0;
};

struct FilterOptions {
  /// Full eigenvalue check every this many steps (0 disables). The update
  /// maps are positive, so this only guards against rounding drift.
  int positivity_check_interval = 16;
};

/// Precomputed filter for one parameter set and scheme.
class Filter {
 public:
  Filter(const ModelParams& params, Scheme scheme, FilterOptions options = {});

  const ModelParams& params() const noexcept { return params_; }
  Scheme scheme() const noexcept { return scheme_; }

  /// Predictive count rates (polarimetry): r_a = |f|^2 tr(L^a L^a rho) / 2.
  PolarimetryRates rates(const Matrix& rho, double t) const;
  /// Predictive photocurrent drift E[dy]/dt: 2 alpha <sin(kF_z)> (homodyne)
  /// or 2 sqrt(M) <F_z> (limit).
  double predicted_drift(const Matrix& rho, double t) const;

  /// One step of the linear filter applied to an arbitrary operator.
  /// Linear in sigma; no renormalization.
  Matrix linear_map(const Matrix& sigma, const ObservationIncrement& obs, double t) const;

  /// Advances the state by one step in its own mode. Returns the innovation.
  StepInnovation step(FilterState& state, const ObservationIncrement& obs) const;

  Moments moments(const Matrix& rho) const;

 private:
  StepInnovation normalized_step(FilterState& state, const ObservationIncrement& obs) const;
  StepInnovation linear_step(FilterState& state, const ObservationIncrement& obs) const;
  Matrix field_rotation(const Matrix& rho) const;
  Matrix polarimetry_drift(const Matrix& rho, double t, const PolarimetryRates* normalized_rates) const;
  Matrix apply_jump(const Matrix& rho, CountEvent event) const;
  Eigen::MatrixXd diffusive_weights(double dy, double t) const;
  StepInnovation innovation(const Matrix& rho, const ObservationIncrement& obs, double t) const;
  void check_increment(const FilterState& state, const ObservationIncrement& obs) const;
  void guard_positivity(FilterState& state) const;

  ModelParams params_;
  Scheme scheme_;
  FilterOptions options_;
  RealVector fz_;
  RealVector cos_;
  RealVector sin_;
  RealVector l_xi_;
  RealVector l_eta_;
  Eigen::MatrixXd dissipator_shape_;  // c c^T + s s^T - 1
  Eigen::MatrixXd jump_shape_;        // (l_xi l_xi^T + l_eta l_eta^T) / 2
  SpinOperator fx_;
  SpinOperator fy_;
  Matrix field_unitary_;
  bool has_field_ = false;
};

// Free-function forms of the individual updates. Each builds a Filter for the
// given parameters; prefer a Filter instance in loops.
PolarimetryRates polarimetry_rates(const FilterState& state, const ModelParams& params, double t);
FilterState polarimetry_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params);
FilterState polarimetry_zakai_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params);
FilterState homodyne_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params);
FilterState homodyne_zakai_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params);
FilterState limit_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params);
FilterState limit_zakai_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params);

/// Largest alpha^2 dt accepted by the polarimetry filter (one jump per step).
inline constexpr double kMaxJumpProbability = 0.1;

}  // namespace faraday
