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

// Characteristic functionals Phi(k, t) = E exp(-i int_0^t k dY) of the output
// processes. F_z is conserved, so every analytic form is a mixture over F_z
// eigenvalues m (weights p_m = <m|rho0|m>) of scalar exponentials
//   Phi^+     exp int a^2 (e^{-ik/a^2} - 1)
//   Phi^-     exp int a^2 (cos(k/a) - 1) - i a^2 sin(k/a) sin(2 kappa m)
//   homodyne  exp int -k^2/2 - 2i k a sin(kappa m)
//   limit     exp int -k^2/2 - 2i k sqrt(M) m
// with k = k(s) piecewise constant.

#include <cstddef>
#include <vector>

#include "faraday/model.hpp"
#include "faraday/test_function.hpp"
#include "faraday/trajectory.hpp"

namespace faraday {

enum class Process { plus, minus, homodyne, limit };

Process parse_process(std::string_view name);
std::string_view process_name(Process p);

/// Values of Phi(c k, t) for each scale c in the sweep.
struct CharFunc {
  Process process = Process::minus;
  double t = 0.0;
  std::vector<double> k;
  std::vector<Complex> value;
  /// Monte Carlo standard error (empirical only; zero for analytic forms).
  std::vector<double> standard_error;
};

/// Evenly spaced grid of n points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

// Single evaluations at time t for the test function k.
Complex charfunc_plus(const TestFunction& k, double alpha, double t);
Complex charfunc_minus(const TestFunction& k, double alpha, double kappa, const SpinSpace& space, const RealVector& p,
                       double t);
Complex charfunc_homodyne(const TestFunction& k, double alpha, double kappa, const SpinSpace& space,
                          const RealVector& p, double t);
Complex charfunc_limit(const TestFunction& k, double m, const SpinSpace& space, const RealVector& p, double t);

// Sweeps over scalar multiples c * shape, c in k_grid. `p` is validated as a
// probability vector of size 2J+1.
CharFunc charfunc_plus_analytic(const TestFunction& shape, const std::vector<double>& k_grid, const ModelParams& params,
                                double t);
CharFunc charfunc_minus_analytic(const TestFunction& shape, const std::vector<double>& k_grid,
                                 const ModelParams& params, const RealVector& p, double t);
CharFunc charfunc_homodyne_analytic(const TestFunction& shape, const std::vector<double>& k_grid,
                                    const ModelParams& params, const RealVector& p, double t);
CharFunc charfunc_limit_analytic(const TestFunction& shape, const std::vector<double>& k_grid, double m,
                                 const SpinSpace& space, const RealVector& p, double t);
/// Dispatch on the process kind.
CharFunc charfunc_analytic(Process process, const TestFunction& shape, const std::vector<double>& k_grid,
                           const ModelParams& params, const RealVector& p, double t);

/// Empirical Phi at the horizon from the ensemble's terminal pairings with
/// its test function. Requires N >= 100 and a scheme matching the process.
CharFunc empirical_charfunc(const EnsembleSummary& ensemble, Process process, const std::vector<double>& k_grid);

/// Largest |a_i - b_i|.
double sup_distance(const CharFunc& a, const CharFunc& b);

struct ConvergenceRow {
  double alpha = 0.0;
  double kappa = 0.0;
  double d_polarimetry = 0.0;
  double d_homodyne = 0.0;
  /// log(d_prev / d) / log(alpha / alpha_prev); NaN on the first row.
  double rate_polarimetry = 0.0;
  double rate_homodyne = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of -log d against log alpha (NaN for one row).
  double fitted_rate_polarimetry = 0.0;
  double fitted_rate_homodyne = 0.0;
};

/// Sup-norm distance of Phi^- and the homodyne Phi from the limit Phi-bar at
/// fixed M with kappa = sqrt(M) / alpha, for constant k over k_grid.
ConvergenceStudy convergence_study(double m, const std::vector<double>& alphas, const std::vector<double>& k_grid,
                                   double horizon, const SpinSpace& space, const RealVector& p);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test (asymptotic distribution with the
/// small-sample correction of the effective size).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

}  // namespace faraday
