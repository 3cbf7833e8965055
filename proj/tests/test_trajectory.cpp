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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "faraday/error.hpp"
#include "faraday/trajectory.hpp"
#include "support.hpp"

using namespace faraday;
using faraday::testing::max_abs;

namespace {

ModelParams params(int twice_j, double alpha, double kappa, double horizon, double dt) {
  return ModelParams::from_alpha_kappa(SpinSpace::from_twice_j(twice_j), alpha, kappa, horizon, dt);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("same seed gives an identical record") {
  for (Scheme sc : {Scheme::polarimetry, Scheme::homodyne, Scheme::limit}) {
    const ModelParams p = params(2, 4.0, 0.25, 0.2, 1e-3);
    const TrajectoryRecord a = simulate(p, sc, FilterMode::normalized, coherent_x_state(p.space), 99);
    const TrajectoryRecord b = simulate(p, sc, FilterMode::normalized, coherent_x_state(p.space), 99);
    const TrajectoryRecord c = simulate(p, sc, FilterMode::normalized, coherent_x_state(p.space), 100);
    REQUIRE(a.steps() == 200);
    bool same = true, differs = false;
    for (std::size_t k = 0; k < a.steps(); ++k) {
      same = same && a.increments[k].event == b.increments[k].event && a.increments[k].dy == b.increments[k].dy;
      differs = differs || a.increments[k].event != c.increments[k].event || a.increments[k].dy != c.increments[k].dy;
      same = same && a.moments[k + 1].fz == b.moments[k + 1].fz;
    }
    CHECK(same);
    CHECK(differs);
  }
  CHECK(trajectory_seed(1, 0) != trajectory_seed(1, 1));
  CHECK(trajectory_seed(1, 0) != trajectory_seed(2, 0));
}

TEST_CASE("scaled sum and difference processes are exact running sums") {
  const ModelParams p = params(1, 5.0, 0.3, 1.0, 1e-3);
  const TrajectoryRecord r = simulate_polarimetry(p, coherent_x_state(p.space), 5);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    CHECK(r.y_plus[k] == static_cast<double>(r.count_xi[k] + r.count_eta[k]) / 25.0);
    CHECK(r.y_minus[k] == static_cast<double>(r.count_xi[k] - r.count_eta[k]) / 5.0);
    if (k > 0) {
      CHECK(r.count_xi[k] >= r.count_xi[k - 1]);
      CHECK(r.count_eta[k] >= r.count_eta[k - 1]);
    }
  }
  CHECK(r.count_xi.back() + r.count_eta.back() > 0);
}

TEST_CASE("count split for |+1/2> follows the diagonal rate formula") {
  // r_xi / alpha^2 = (1 + sin kappa) / 2 = 3/4 at kappa = pi/6.
  const ModelParams p = params(1, 10.0, M_PI / 6, 1.0, 1e-3);
  const DensityState up = DensityState::fz_eigenstate(p.space, 0);
  const EnsembleSummary e = run_ensemble(p, Scheme::polarimetry, FilterMode::normalized, up, 200, 3);
  double xi = 0, total = 0;
  for (const TerminalSample& s : e.terminal) {
    xi += s.count_xi;
    total += s.count_xi + s.count_eta;
  }
  const double frac = xi / total;
  CHECK(std::abs(frac - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / total));
}

TEST_CASE("homodyne without coupling records a Wiener process") {
  const ModelParams p = params(1, 4.0, 0.0, 1.0, 1e-3);
  const EnsembleSummary e = run_ensemble(p, Scheme::homodyne, FilterMode::normalized, coherent_x_state(p.space), 1000, 8);
  std::vector<double> y;
  for (const TerminalSample& s : e.terminal) y.push_back(s.photocurrent);
  CHECK(std::abs(mean(y)) < 3.0 * std::sqrt(1.0 / 1000));
  CHECK(std::abs(variance(y) - 1.0) < 3.0 * std::sqrt(2.0 / 1000));
}

TEST_CASE("limit scheme from an F_z eigenstate: Gaussian output with constant drift") {
  const ModelParams p = ModelParams::from_strength(SpinSpace::from_twice_j(1), 1.0, 8.0, 1.0, 1e-3);
  const EnsembleSummary e =
      run_ensemble(p, Scheme::limit, FilterMode::normalized, DensityState::fz_eigenstate(p.space, 0), 1000, 9);
  std::vector<double> y;
  for (const TerminalSample& s : e.terminal) y.push_back(s.photocurrent);
  CHECK(std::abs(mean(y) - 1.0) < 3.0 * std::sqrt(1.0 / 1000));
  CHECK(std::abs(variance(y) - 1.0) < 3.0 * std::sqrt(2.0 / 1000));
}

TEST_CASE("innovations: zero mean and unit quadratic variation rate") {
  for (Scheme sc : {Scheme::homodyne, Scheme::limit}) {
    const ModelParams p = params(2, 4.0, 0.25, 1.0, 1e-3);
    const TrajectoryRecord r = simulate(p, sc, FilterMode::normalized, coherent_x_state(p.space), 21);
    CHECK(std::abs(r.innovation_qv.back() - 1.0) < 5.0 * std::sqrt(2.0 / 1000));
    CHECK(std::abs(r.innovation.back()[0]) < 4.0);
  }
}

TEST_CASE("a single-trajectory ensemble reproduces the record") {
  const ModelParams p = params(2, 4.0, 0.25, 0.1, 1e-3);
  EnsembleOptions opt;
  opt.sample_every = 1;
  const EnsembleSummary e = run_ensemble(p, Scheme::homodyne, FilterMode::normalized, coherent_x_state(p.space), 1, 4, opt);
  const TrajectoryRecord r =
      simulate(p, Scheme::homodyne, FilterMode::normalized, coherent_x_state(p.space), trajectory_seed(4, 0));
  REQUIRE(e.times.size() == r.times.size());
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    CHECK(e.mean(Series::fz, k) == r.moments[k].fz);
    CHECK(e.mean(Series::observation, k) == r.photocurrent[k]);
  }
  CHECK(e.terminal[0].photocurrent == r.photocurrent.back());
}

TEST_CASE("ensembles do not depend on the thread count") {
  const ModelParams p = params(2, 4.0, 0.25, 0.2, 1e-3);
  EnsembleOptions one, four;
  one.threads = 1;
  four.threads = 4;
  for (Scheme sc : {Scheme::polarimetry, Scheme::limit}) {
    const auto a = run_ensemble(p, sc, FilterMode::normalized, coherent_x_state(p.space), 100, 77, one);
    const auto b = run_ensemble(p, sc, FilterMode::normalized, coherent_x_state(p.space), 100, 77, four);
    for (std::size_t s = 0; s < a.times.size(); ++s) {
      CHECK(max_abs(a.mean_state[s] - b.mean_state[s]) == 0.0);
      CHECK(a.mean(Series::var_fz, s) == b.mean(Series::var_fz, s));
      CHECK(a.mean_state[s].trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < a.terminal.size(); ++i) CHECK(a.terminal[i].pairing_minus == b.terminal[i].pairing_minus);
  }
}

TEST_CASE("replay through the linear filter reproduces the normalized record") {
  const ModelParams p = params(1, 4.0, 0.25, 0.5, 1e-4);
  for (Scheme sc : {Scheme::polarimetry, Scheme::homodyne, Scheme::limit}) {
    TrajectoryOptions opt;
    opt.record_full_state = true;
    const TrajectoryRecord a = simulate(p, sc, FilterMode::normalized, coherent_x_state(p.space), 12, opt);
    const TrajectoryRecord b = replay(p, sc, FilterMode::linear, coherent_x_state(p.space), a.increments, opt);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k) worst = std::max(worst, max_abs(a.states[k] - b.states[k]));
    CHECK(worst < 1e-10);
  }
  CHECK_THROWS_AS(replay(p, Scheme::homodyne, FilterMode::linear, coherent_x_state(p.space), {}), DomainError);
}

TEST_CASE("ensemble preconditions") {
  const ModelParams p = params(1, 4.0, 0.25, 0.1, 1e-3);
  CHECK_THROWS_AS(run_ensemble(p, Scheme::limit, FilterMode::normalized, coherent_x_state(p.space), 0, 1), DomainError);
  const ModelParams hot = params(1, 20.0, 0.25, 0.1, 1e-3);
  CHECK_THROWS_AS(simulate_polarimetry(hot, coherent_x_state(hot.space), 1), DomainError);
}
