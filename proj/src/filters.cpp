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

#include "faraday/filters.hpp"

#include <cmath>
#include <string>

#include "faraday/error.hpp"

namespace faraday {

Scheme parse_scheme(std::string_view name) {
  if (name == "polarimetry") return Scheme::polarimetry;
  if (name == "homodyne") return Scheme::homodyne;
  if (name == "limit") return Scheme::limit;
  throw DomainError("unknown scheme '" + std::string(name) + "' (expected polarimetry, homodyne or limit)");
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::polarimetry: return "polarimetry";
    case Scheme::homodyne: return "homodyne";
    case Scheme::limit: return "limit";
  }
  return "?";
}

FilterMode parse_mode(std::string_view name) {
  if (name == "normalized") return FilterMode::normalized;
  if (name == "linear") return FilterMode::linear;
  throw DomainError("unknown mode '" + std::string(name) + "' (expected normalized or linear)");
}

std::string_view mode_name(FilterMode mode) { return mode == FilterMode::linear ? "linear" : "normalized"; }

FilterState FilterState::start(const DensityState& rho0, Scheme scheme, FilterMode mode) {
  FilterState s;
  s.rho = rho0.matrix() / rho0.trace();
  s.scheme = scheme;
  s.mode = mode;
  s.log_likelihood = std::log(rho0.trace());
  return s;
}

Matrix FilterState::unnormalized() const { return std::exp(log_likelihood) * rho; }

Filter::Filter(const ModelParams& params, Scheme scheme, FilterOptions options)
    : params_(params), scheme_(scheme), options_(options) {
  params_.validate();
  if (scheme_ == Scheme::polarimetry) {
    const double a = params_.max_alpha();
    if (a * a * params_.dt > kMaxJumpProbability) {
      throw DomainError("polarimetry: alpha^2 dt = " + std::to_string(a * a * params_.dt) + " exceeds " +
                        std::to_string(kMaxJumpProbability) + "; reduce dt");
    }
  }
  fz_ = params_.space.fz_diagonal();
  cos_ = (params_.kappa * fz_).array().cos();
  sin_ = (params_.kappa * fz_).array().sin();
  l_xi_ = cos_ + sin_;
  l_eta_ = cos_ - sin_;
  dissipator_shape_ = (cos_ * cos_.transpose() + sin_ * sin_.transpose()).array() - 1.0;
  jump_shape_ = 0.5 * (l_xi_ * l_xi_.transpose() + l_eta_ * l_eta_.transpose());
  const SpinOps ops = make_spin_ops(params_.space);
  fx_ = ops.fx;
  fy_ = ops.fy;
  has_field_ = params_.gamma_b != 0.0;
  if (has_field_) field_unitary_ = unitary_exp(fy_, params_.gamma_b * params_.dt);
}

PolarimetryRates Filter::rates(const Matrix& rho, double t) const {
  const double half_f2 = 0.5 * std::pow(params_.alpha_at(t), 2);
  const RealVector pop = rho.diagonal().real();
  return {half_f2 * l_xi_.cwiseAbs2().dot(pop), half_f2 * l_eta_.cwiseAbs2().dot(pop)};
}

double Filter::predicted_drift(const Matrix& rho, double t) const {
  const RealVector pop = rho.diagonal().real();
  if (scheme_ == Scheme::homodyne) return 2.0 * params_.alpha_at(t) * sin_.dot(pop);
  if (scheme_ == Scheme::limit) return 2.0 * std::sqrt(params_.measurement_strength) * fz_.dot(pop);
  throw DomainError("predicted_drift: polarimetry has count rates, not a photocurrent drift");
}

Matrix Filter::field_rotation(const Matrix& rho) const {
  if (!has_field_) return rho;
  return field_unitary_ * rho * field_unitary_.adjoint();
}

// Zakai form (normalized_rates == nullptr):
//   sigma + [L*(sigma) - sum_a |f|^2/2 (L^a sigma L^a - sigma)] dt
// Normalized form:
//   rho + [L*(rho) - sum_a (L^a rho L^a / tr(L^a L^a rho) - rho) r_a] dt
// The field part of L* is handled by field_rotation.
Matrix Filter::polarimetry_drift(const Matrix& rho, double t, const PolarimetryRates* normalized_rates) const {
  const double f2 = std::pow(params_.alpha_at(t), 2);
  const double h = params_.dt;
  const double restore = normalized_rates ? (normalized_rates->xi + normalized_rates->eta) : f2;
  const Eigen::MatrixXd factor = ((f2 * h) * (dissipator_shape_ - jump_shape_)).array() + (1.0 + restore * h);
  return (rho.array() * factor.cast<Complex>().array()).matrix();
}

Matrix Filter::apply_jump(const Matrix& rho, CountEvent event) const {
  const RealVector& l = event == CountEvent::xi ? l_xi_ : l_eta_;
  return (rho.array() * (l * l.transpose()).cast<Complex>().array()).matrix();
}

Eigen::MatrixXd Filter::diffusive_weights(double dy, double t) const {
  const double h = params_.dt;
  if (scheme_ == Scheme::homodyne) {
    const double a = params_.alpha_at(t);
    const RealVector m = (1.0 - 0.5 * a * a * h) + (a * dy) * sin_.array();
    return m * m.transpose() + (a * a * h) * cos_ * cos_.transpose();
  }
  const double mstr = params_.measurement_strength;
  const RealVector m = (1.0 + std::sqrt(mstr) * dy * fz_.array() - 0.5 * mstr * h * fz_.array().square()).matrix();
  return m * m.transpose();
}

Matrix Filter::linear_map(const Matrix& sigma, const ObservationIncrement& obs, double t) const {
  Matrix out = field_rotation(sigma);
  if (scheme_ == Scheme::polarimetry) {
    out = polarimetry_drift(out, t, nullptr);
    if (obs.event != CountEvent::none) out = apply_jump(out, obs.event);
    return out;
  }
  return (out.array() * diffusive_weights(obs.dy, t).cast<Complex>().array()).matrix();
}

StepInnovation Filter::innovation(const Matrix& rho, const ObservationIncrement& obs, double t) const {
  StepInnovation inn;
  if (scheme_ == Scheme::polarimetry) {
    const PolarimetryRates r = rates(rho, t);
    inn.value[0] = (obs.event == CountEvent::xi ? 1.0 : 0.0) - r.xi * obs.dt;
    inn.value[1] = (obs.event == CountEvent::eta ? 1.0 : 0.0) - r.eta * obs.dt;
  } else {
    inn.value[0] = obs.dy - predicted_drift(rho, t) * obs.dt;
  }
  return inn;
}

void Filter::check_increment(const FilterState& state, const ObservationIncrement& obs) const {
  if (state.scheme != scheme_) throw DomainError("filter step: state scheme does not match the filter");
  if (state.rho.rows() != params_.space.dim()) throw DomainError("filter step: state dimension mismatch");
  if (std::abs(obs.dt - params_.dt) > 1e-12 * params_.dt) {
    throw DomainError("filter step: observation dt differs from the configured dt");
  }
  if (!std::isfinite(obs.dy)) throw DomainError("filter step: dy must be finite");
  if (scheme_ != Scheme::polarimetry && obs.event != CountEvent::none) {
    throw DomainError("filter step: count events only apply to polarimetry");
  }
}

void Filter::guard_positivity(FilterState& state) const {
  const int every = options_.positivity_check_interval;
  if (every <= 0 || state.steps % static_cast<std::uint64_t>(every) != 0) return;
  if (min_hermitian_eigenvalue(state.rho) < -kPositivityFloor) {
    state.rho = project_to_positive(state.rho);
    state.rho /= state.rho.trace().real();
  }
}

// Smallest <L^a L^a> accepted for a recorded count; below this the count
// is treated as impossible.
constexpr double kMinCountWeight = 1e-14;

StepInnovation Filter::normalized_step(FilterState& state, const ObservationIncrement& obs) const {
  const double t = state.t;
  const StepInnovation inn = innovation(state.rho, obs, t);
  Matrix rho = field_rotation(state.rho);
  double tr = 1.0;
  if (scheme_ == Scheme::polarimetry) {
    const PolarimetryRates r = rates(state.rho, t);
    rho = polarimetry_drift(rho, t, &r);
    tr = rho.trace().real();
    rho /= tr;
    if (obs.event != CountEvent::none) {
      Matrix jumped = apply_jump(rho, obs.event);
      const double p = jumped.trace().real();
      if (!(p > kMinCountWeight)) {
        throw InvariantError("polarimetry: recorded count has zero probability under the filtered state");
      }
      rho = jumped / p;
      tr *= p;
    }
  } else {
    rho = (rho.array() * diffusive_weights(obs.dy, t).cast<Complex>().array()).matrix();
    tr = rho.trace().real();
    if (!(tr > 0.0)) throw InvariantError("diffusive filter: state trace vanished");
    rho /= tr;
  }
  state.rho = std::move(rho);
  state.log_likelihood += std::log(tr);
  state.t = params_.time_at(++state.steps);
  guard_positivity(state);
  return inn;
}

StepInnovation Filter::linear_step(FilterState& state, const ObservationIncrement& obs) const {
  const double t = state.t;
  const StepInnovation inn = innovation(state.rho, obs, t);
  Matrix sigma = linear_map(state.rho, obs, t);
  const double tr = sigma.trace().real();
  if (!(tr > 1e-300)) {
    throw InvariantError("linear filter: trace of the unnormalized state vanished (inconsistent record)");
  }
  state.rho = sigma / tr;
  state.log_likelihood += std::log(tr);
  state.t = params_.time_at(++state.steps);
  guard_positivity(state);
  return inn;
}

StepInnovation Filter::step(FilterState& state, const ObservationIncrement& obs) const {
  check_increment(state, obs);
  return state.mode == FilterMode::linear ? linear_step(state, obs) : normalized_step(state, obs);
}

Moments Filter::moments(const Matrix& rho) const {
  Moments m;
  const double tr = rho.trace().real();
  m.fx = (rho * fx_).trace().real() / tr;
  m.fy = (rho * fy_).trace().real() / tr;
  const RealVector pop = rho.diagonal().real() / tr;
  m.fz = fz_.dot(pop);
  m.fz2 = fz_.cwiseAbs2().dot(pop);
  m.var_fz = m.fz2 - m.fz * m.fz;
  m.purity = rho.cwiseAbs2().sum() / (tr * tr);
  return m;
}

namespace {

FilterState run_single(FilterState state, const ObservationIncrement& obs, const ModelParams& params, Scheme scheme,
                       FilterMode mode, const char* name) {
  if (state.scheme != scheme || state.mode != mode) {
    throw DomainError(std::string(name) + ": expected a " + std::string(scheme_name(scheme)) + " state in " +
                      std::string(mode_name(mode)) + " mode");
  }
  Filter(params, scheme).step(state, obs);
  return state;
}

}  // namespace

PolarimetryRates polarimetry_rates(const FilterState& state, const ModelParams& params, double t) {
  return Filter(params, Scheme::polarimetry).rates(state.rho, t);
}

FilterState polarimetry_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params) {
  return run_single(std::move(state), obs, params, Scheme::polarimetry, FilterMode::normalized, "polarimetry_step");
}

FilterState polarimetry_zakai_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params) {
  return run_single(std::move(state), obs, params, Scheme::polarimetry, FilterMode::linear, "polarimetry_zakai_step");
}

FilterState homodyne_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params) {
  return run_single(std::move(state), obs, params, Scheme::homodyne, FilterMode::normalized, "homodyne_step");
}

FilterState homodyne_zakai_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params) {
  return run_single(std::move(state), obs, params, Scheme::homodyne, FilterMode::linear, "homodyne_zakai_step");
}

FilterState limit_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params) {
  return run_single(std::move(state), obs, params, Scheme::limit, FilterMode::normalized, "limit_step");
}

FilterState limit_zakai_step(FilterState state, const ObservationIncrement& obs, const ModelParams& params) {
  return run_single(std::move(state), obs, params, Scheme::limit, FilterMode::linear, "limit_zakai_step");
}

}  // namespace faraday
