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

#include <complex>
#include <cstddef>
#include <vector>

#include "faraday/spin_algebra.hpp"

namespace faraday {

/// One piece of a piecewise-constant drive amplitude: alpha holds from
/// `start` until the next piece begins.
struct AlphaPiece {
  double start;
  double alpha;
};

/// Physical and discretization parameters shared by every module.
///
/// alpha is the drive amplitude (|f|^2 = alpha^2 photons per unit time),
/// kappa the Faraday rotation angle per photon and M = alpha^2 kappa^2 the
/// measurement strength. gamma_b is the Larmor rate of an optional field
/// term gamma_b F_y.
struct ModelParams {
  SpinSpace space = SpinSpace::from_twice_j(1);
  double alpha = 0.0;
  double kappa = 0.0;
  double measurement_strength = 0.0;
  double phi = 0.0;
  double gamma_b = 0.0;
  double horizon = 1.0;
  double dt = 1e-3;
  /// Empty means alpha is constant.
  std::vector<AlphaPiece> alpha_schedule;

  /// Builds parameters from (alpha, kappa) and sets M = alpha^2 kappa^2.
  static ModelParams from_alpha_kappa(const SpinSpace& space, double alpha, double kappa, double horizon, double dt);
  /// Builds parameters from (M, alpha) and sets kappa = sqrt(M) / alpha.
  static ModelParams from_strength(const SpinSpace& space, double m, double alpha, double horizon, double dt);

  double alpha_at(double t) const;
  /// f(t) = alpha(t) exp(i phi).
  std::complex<double> drive(double t) const;
  double max_alpha() const;
  std::size_t steps() const;
  double time_at(std::size_t k) const { return static_cast<double>(k) * dt; }

  /// Throws DomainError when an invariant does not hold.
  void validate() const;
};

}  // namespace faraday
