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

#include "faraday/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "faraday/error.hpp"

namespace faraday {

ModelParams ModelParams::from_alpha_kappa(const SpinSpace& space, double alpha, double kappa, double horizon,
                                          double dt) {
  ModelParams p;
  p.space = space;
  p.alpha = alpha;
  p.kappa = kappa;
  p.measurement_strength = alpha * alpha * kappa * kappa;
  p.horizon = horizon;
  p.dt = dt;
  p.validate();
  return p;
}

ModelParams ModelParams::from_strength(const SpinSpace& space, double m, double alpha, double horizon, double dt) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive to derive kappa from M");
  if (!(m >= 0.0)) throw DomainError("measurement strength must be nonnegative");
  ModelParams p;
  p.space = space;
  p.alpha = alpha;
  p.kappa = std::sqrt(m) / alpha;
  p.measurement_strength = m;
  p.horizon = horizon;
  p.dt = dt;
  p.validate();
  return p;
}

double ModelParams::alpha_at(double t) const {
  if (alpha_schedule.empty()) return alpha;
  double a = alpha_schedule.front().alpha;
  for (const auto& piece : alpha_schedule) {
    if (piece.start <= t) a = piece.alpha;
    else break;
  }
  return a;
}

std::complex<double> ModelParams::drive(double t) const { return std::polar(alpha_at(t), phi); }

double ModelParams::max_alpha() const {
  double a = alpha;
  for (const auto& piece : alpha_schedule) a = std::max(a, piece.alpha);
  return a;
}

std::size_t ModelParams::steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

void ModelParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and >= 0");
  if (!std::isfinite(kappa)) throw DomainError("kappa must be finite");
  if (!(measurement_strength >= 0.0) || !std::isfinite(measurement_strength)) {
    throw DomainError("measurement strength M must be finite and >= 0");
  }
  if (alpha > 0.0 || kappa != 0.0) {
    const double implied = alpha * alpha * kappa * kappa;
    if (std::abs(implied - measurement_strength) > 1e-12 * std::max(1.0, measurement_strength)) {
      throw DomainError("M = " + std::to_string(measurement_strength) + " conflicts with alpha^2 kappa^2 = " +
                        std::to_string(implied));
    }
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(horizon >= dt)) throw DomainError("horizon T must be >= dt");
  const double n = horizon / dt;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    throw DomainError("horizon T must be an integer multiple of dt");
  }
  if (!std::isfinite(phi) || !std::isfinite(gamma_b)) throw DomainError("phi and gamma_b must be finite");
  double prev = -1.0;
  for (const auto& piece : alpha_schedule) {
    if (!(piece.start > prev) || !(piece.alpha >= 0.0)) {
      throw DomainError("alpha schedule must have increasing start times and alpha >= 0");
    }
    prev = piece.start;
  }
  if (!alpha_schedule.empty() && alpha_schedule.front().start != 0.0) {
    throw DomainError("alpha schedule must start at t = 0");
  }
}

}  // namespace faraday
