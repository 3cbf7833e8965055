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

// Co-simulation of observation records and their filters.
//
// Records are sampled from the filter's own predictive law: count events from
// the state-dependent rates, photocurrent increments as predicted drift plus
// an independent Wiener increment. Each trajectory owns a random stream
// seeded from (base_seed, trajectory index), so ensembles give identical
// results for any thread count.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "faraday/filters.hpp"
#include "faraday/model.hpp"
#include "faraday/test_function.hpp"

namespace faraday {

/// Identifies the random number scheme in run manifests.
inline constexpr std::string_view kRngIdentifier =
    "std::mt19937_64 per trajectory, seed = splitmix64(base_seed, index); "
    "uniform_real_distribution / normal_distribution (libstdc++)";

/// Seed of trajectory `index` in an ensemble started from `base_seed`.
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index);

struct TrajectoryOptions {
  bool record_full_state = false;
  FilterOptions filter;
};

struct TrajectoryRecord {
  Scheme scheme = Scheme::polarimetry;
  FilterMode mode = FilterMode::normalized;
  ModelParams params;
  std::uint64_t seed = 0;

  std::vector<double> times;                     // steps + 1
  std::vector<ObservationIncrement> increments;  // steps
  std::vector<Moments> moments;                  // steps + 1
  std::vector<double> log_likelihood;            // steps + 1
  std::vector<Matrix> states;                    // steps + 1 when requested

  // Polarimetry outputs: Y^xi, Y^eta, Y^+ = (Y^xi + Y^eta) / alpha^2 and
  // Y^- = (Y^xi - Y^eta) / alpha.
  std::vector<std::int64_t> count_xi;
  std::vector<std::int64_t> count_eta;
  std::vector<double> y_plus;
  std::vector<double> y_minus;
  // Homodyne Y or limit Ybar: integrated photocurrent.
  std::vector<double> photocurrent;

  /// Cumulative innovations; diffusive schemes use channel 0.
  std::vector<std::array<double, 2>> innovation;
  /// Cumulative sum of squared innovation increments (channel 0).
  std::vector<double> innovation_qv;

  std::size_t steps() const { return increments.size(); }
};

/// Steps a filter forward while tracking the derived output processes.
class CoSimulator {
 public:
  CoSimulator(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0, std::uint64_t seed,
              FilterOptions options = {});

  bool done() const { return step_ >= total_steps_; }
  std::size_t step_index() const { return step_; }
  std::size_t total_steps() const { return total_steps_; }

  /// Draws the next observation from the predictive law of the current state.
  ObservationIncrement sample();
  /// Advances the filter with a given observation.
  void advance(const ObservationIncrement& obs);
  /// sample() followed by advance().
  ObservationIncrement step();

  const Filter& filter() const { return filter_; }
  const FilterState& state() const { return state_; }
  const StepInnovation& last_innovation() const { return last_innovation_; }
  std::int64_t count_xi() const { return count_xi_; }
  std::int64_t count_eta() const { return count_eta_; }
  double y_plus() const;
  double y_minus() const;
  double photocurrent() const { return photocurrent_; }
  const std::array<double, 2>& cumulative_innovation() const { return cumulative_innovation_; }
  double innovation_qv() const { return innovation_qv_; }

 private:
  Filter filter_;
  FilterState state_;
  std::mt19937_64 rng_;
  std::size_t step_ = 0;
  std::size_t total_steps_ = 0;
  std::int64_t count_xi_ = 0;
  std::int64_t count_eta_ = 0;
  double photocurrent_ = 0.0;
  std::array<double, 2> cumulative_innovation_{0.0, 0.0};
  double innovation_qv_ = 0.0;
  StepInnovation last_innovation_;
};

TrajectoryRecord simulate(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0,
                          std::uint64_t seed, const TrajectoryOptions& options = {});

TrajectoryRecord simulate_polarimetry(const ModelParams& params, const DensityState& rho0, std::uint64_t seed,
                                      FilterMode mode = FilterMode::normalized, const TrajectoryOptions& options = {});
TrajectoryRecord simulate_homodyne(const ModelParams& params, const DensityState& rho0, std::uint64_t seed,
                                   FilterMode mode = FilterMode::normalized, const TrajectoryOptions& options = {});
TrajectoryRecord simulate_limit(const ModelParams& params, const DensityState& rho0, std::uint64_t seed,
                                FilterMode mode = FilterMode::normalized, const TrajectoryOptions& options = {});

/// Runs a filter over a recorded observation sequence.
TrajectoryRecord replay(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0,
                        const std::vector<ObservationIncrement>& increments, const TrajectoryOptions& options = {});

enum class Series : int {
  fx = 0,
  fy,
  fz,
  fz2,
  var_fz,
  purity,
  innovation_0,
  innovation_1,
  observation,  // Y^- (polarimetry) or the integrated photocurrent
  log_likelihood,
};
inline constexpr int kSeriesCount = 10;

/// Per-trajectory values at the horizon.
struct TerminalSample {
  std::int64_t count_xi = 0;
  std::int64_t count_eta = 0;
  double y_plus = 0.0;
  double y_minus = 0.0;
  double photocurrent = 0.0;
  double fz = 0.0;
  double var_fz = 0.0;
  double innovation_qv = 0.0;
  // Pairings  integral k(s) dY_s  with the ensemble test function.
  double pairing_plus = 0.0;
  double pairing_minus = 0.0;
  double pairing_photocurrent = 0.0;
};

struct EnsembleOptions {
  /// Sample every this many steps (the final step is always sampled);
  /// 0 picks about 100 sample points.
  std::size_t sample_every = 0;
  unsigned threads = 1;
  /// Shape used for the terminal pairings; constant 1 when absent, which
  /// makes the pairings the terminal values of the processes.
  std::optional<TestFunction> test_function;
  FilterOptions filter;
};

struct EnsembleSummary {
  Scheme scheme = Scheme::polarimetry;
  FilterMode mode = FilterMode::normalized;
  std::size_t n = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::size_t> sample_steps;
  std::vector<double> times;
  std::vector<Matrix> mean_state;
  /// Elementwise E|rho_ij|^2 at each sample time.
  std::vector<Eigen::MatrixXd> state_second_moment;
  std::array<std::vector<double>, kSeriesCount> series_mean;
  std::array<std::vector<double>, kSeriesCount> series_second_moment;
  std::vector<TerminalSample> terminal;

  double mean(Series s, std::size_t sample) const { return series_mean[static_cast<int>(s)][sample]; }
  /// Standard error of the ensemble mean of a series.
  double standard_error(Series s, std::size_t sample) const;
  /// sqrt(sum_ij Var(rho_ij) / N): Monte Carlo error of mean_state in
  /// Frobenius norm.
  double state_standard_error(std::size_t sample) const;
  /// Index of the sample closest to time t.
  std::size_t sample_at(double t) const;
};

EnsembleSummary run_ensemble(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0,
                             std::size_t n, std::uint64_t base_seed, const EnsembleOptions& options = {});

}  // namespace faraday
