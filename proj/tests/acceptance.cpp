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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "faraday/faraday.h"
#include "faraday/generators.hpp"
#include "faraday/ito_calculus.hpp"
#include "faraday/statistics.hpp"
#include "faraday/trajectory.hpp"

using namespace faraday;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <typename... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

RealVector populations(const DensityState& rho) { return rho.matrix().diagonal().real(); }

EnsembleSummary ensemble(const ModelParams& p, Scheme sc, const DensityState& rho0, std::size_t n, std::uint64_t seed,
                         std::size_t sample_every = 0) {
  EnsembleOptions o;
  o.threads = worker_threads();
  o.sample_every = sample_every;
  return run_ensemble(p, sc, FilterMode::normalized, rho0, n, seed, o);
}

// ---------------------------------------------------------------------------
// 1. Generator algebra.

Outcome ac1() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> tj(1, 6);
  double worst_defect = 0.0, worst_table = 0.0;
  for (int point = 0; point < 100; ++point) {
    ModelParams p = ModelParams::from_alpha_kappa(SpinSpace::from_twice_j(tj(rng)), 10.0 * u(rng),
                                                  (2.0 * u(rng) - 1.0) * M_PI, 1.0, 1e-3);
    p.phi = 2.0 * M_PI * u(rng);
    const double t = u(rng);
    for (ito::Generator g : {ito::Generator::U0, ito::Generator::U, ito::Generator::Uprime, ito::Generator::Ubar}) {
      worst_defect = std::max(worst_defect, ito::unitarity_defect(ito::qsde_coefficients(g, p, t)).max_norm());
    }
    // Expected table of the transformed generator, written out directly.
    const int n = p.space.dim();
    const Complex f = p.drive(t);
    const RealVector fz = p.space.fz_diagonal();
    const Matrix c = (p.kappa * fz).array().cos().matrix().cast<Complex>().asDiagonal();
    const Matrix s = (p.kappa * fz).array().sin().matrix().cast<Complex>().asDiagonal();
    const Matrix cm = c - Matrix::Identity(n, n);
    ito::QNoiseExpr table(n);
    table.add(ito::Increment::gauge_xx, cm).add(ito::Increment::gauge_yy, cm);
    table.add(ito::Increment::gauge_xy, -s).add(ito::Increment::gauge_yx, s);
    table.add(ito::Increment::creation_x, f * cm).add(ito::Increment::annihilation_x, std::conj(f) * cm);
    table.add(ito::Increment::creation_y, f * s).add(ito::Increment::annihilation_y, -std::conj(f) * s);
    table.add(ito::Increment::dt, std::norm(f) * cm);
    const ito::QNoiseExpr product = ito::qsde_product(ito::qsde_coefficients(ito::Generator::WeylAdjoint, p, t),
                                                      ito::qsde_coefficients(ito::Generator::U, p, t));
    worst_table = std::max(worst_table, (product - table).max_norm());
  }
  return {worst_defect < 1e-12 && worst_table < 1e-12,
          fmt("max defect %.2e, max table mismatch %.2e (limit 1e-12)", worst_defect, worst_table)};
}

// ---------------------------------------------------------------------------
// 2. Linear vs normalized filter, pathwise. Also collects the diffusive
// innovation quadratic variations at J = 1 for criterion 8.

std::vector<double> qv_samples;

Outcome ac2() {
  double worst = 0.0;
  for (int twice_j : {1, 2, 4}) {
    const ModelParams p = ModelParams::from_alpha_kappa(SpinSpace::from_twice_j(twice_j), 4.0, 0.25, 1.0, 1e-4);
    const DensityState rho0 = DensityState::coherent_x(p.space);
    for (Scheme sc : {Scheme::polarimetry, Scheme::homodyne, Scheme::limit}) {
      const Filter lin(p, sc);
      for (std::uint64_t i = 0; i < 100; ++i) {
        CoSimulator sim(p, sc, FilterMode::normalized, rho0, trajectory_seed(200 + twice_j, i));
        FilterState z = FilterState::start(rho0, sc, FilterMode::linear);
        while (!sim.done()) {
          const ObservationIncrement obs = sim.step();
          lin.step(z, obs);
          worst = std::max(worst, (sim.state().rho - z.rho).cwiseAbs().maxCoeff());
        }
        if (twice_j == 2 && sc != Scheme::polarimetry) qv_samples.push_back(sim.innovation_qv());
      }
    }
  }
  return {worst <= 1e-8, fmt("sup |normalize(linear) - normalized| = %.2e over 900 paths (limit 1e-8)", worst)};
}

// ---------------------------------------------------------------------------
// 3. Tower property. The ensembles are reused by criterion 8.

std::vector<EnsembleSummary> tower_ensembles;

Outcome ac3() {
  const ModelParams p = ModelParams::from_alpha_kappa(SpinSpace::from_twice_j(2), 4.0, 0.25, 1.0, 1e-3);
  const DensityState rho0 = DensityState::coherent_x(p.space);
  bool ok = true;
  double worst_ratio = 0.0;
  for (Scheme sc : {Scheme::polarimetry, Scheme::homodyne, Scheme::limit}) {
    tower_ensembles.push_back(ensemble(p, sc, rho0, 5000, 300 + static_cast<int>(sc), 100));
    const EnsembleSummary& e = tower_ensembles.back();
    const auto master =
        master_evolve(rho0, p, sc == Scheme::limit ? GeneratorKind::limit : GeneratorKind::finite_alpha);
    for (int g = 1; g <= 10; ++g) {
      const std::size_t s = e.sample_at(0.1 * g);
      const double d = (e.mean_state[s] - master[e.sample_steps[s]].matrix()).norm();
      const double se = e.state_standard_error(s);
      worst_ratio = std::max(worst_ratio, d / se);
      ok = ok && d <= 5.0 * se;
    }
  }
  return {ok, fmt("max ||mean - master||_F / SE = %.2f over 3 schemes x 10 times (limit 5)", worst_ratio)};
}

// ---------------------------------------------------------------------------
// 4. Poisson totals.

Outcome ac4() {
  const ModelParams p = ModelParams::from_alpha_kappa(SpinSpace::from_twice_j(2), 10.0, 0.25, 1.0, 1e-4);
  const double lambda = 100.0;
  const double n = 2000.0;
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 401;
  for (const auto& [name, rho0] : {std::pair<const char*, DensityState>{"coherent_x", DensityState::coherent_x(p.space)},
                                   {"fz_eigen", DensityState::fz_eigenstate(p.space, 1)}}) {
    const EnsembleSummary e = ensemble(p, Scheme::polarimetry, rho0, 2000, seed++);
    double sum = 0.0, sum2 = 0.0;
    for (const TerminalSample& t : e.terminal) sum += static_cast<double>(t.count_xi + t.count_eta);
    const double mean = sum / n;
    for (const TerminalSample& t : e.terminal) sum2 += std::pow(static_cast<double>(t.count_xi + t.count_eta) - mean, 2);
    const double var = sum2 / (n - 1.0);
    const double z_mean = (mean - lambda) / std::sqrt(lambda / n);
    const double z_var = (var - lambda) / std::sqrt((2.0 * lambda * lambda + lambda) / n);
    ok = ok && std::abs(z_mean) <= 3.0 && std::abs(z_var) <= 3.0;
    detail += fmt("%s mean %.2f (z %+.2f) var %.2f (z %+.2f); ", name, mean, z_mean, var, z_var);
  }
  return {ok, detail + "limit |z| <= 3"};
}

// ---------------------------------------------------------------------------
// 5. Characteristic functionals.

Outcome ac5() {
  const ModelParams p = ModelParams::from_alpha_kappa(SpinSpace::from_twice_j(1), 4.0, 0.25, 1.0, 1e-4);
  const DensityState rho0 = DensityState::coherent_x(p.space);
  const RealVector pop = populations(rho0);
  const std::vector<double> grid = linear_grid(-5.0, 5.0, 41);
  const TestFunction unit = TestFunction::constant(1.0, 1.0);
  const double band = 4.0 / std::sqrt(4000.0);
  const EnsembleSummary pol = ensemble(p, Scheme::polarimetry, rho0, 4000, 501);
  const EnsembleSummary hom = ensemble(p, Scheme::homodyne, rho0, 4000, 502);
  const EnsembleSummary lim = ensemble(p, Scheme::limit, rho0, 4000, 503);
  bool ok = true;
  std::string detail;
  for (const auto& [proc, ens] : {std::pair<Process, const EnsembleSummary*>{Process::minus, &pol},
                                  {Process::homodyne, &hom},
                                  {Process::plus, &pol},
                                  {Process::limit, &lim}}) {
    const CharFunc emp = empirical_charfunc(*ens, proc, grid);
    const CharFunc ana = charfunc_analytic(proc, unit, grid, p, pop, 1.0);
    int inside = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) inside += std::abs(emp.value[i] - ana.value[i]) <= band;
    ok = ok && inside >= 0.95 * 41;
    detail += fmt("%s %d/41; ", std::string(process_name(proc)).c_str(), inside);
  }
  return {ok, detail + "need >= 39/41 within 4/sqrt(N)"};
}

// ---------------------------------------------------------------------------
// 6. Strong-driving convergence.

Outcome ac6() {
  const SpinSpace s = SpinSpace::from_twice_j(1);
  const ConvergenceStudy st = convergence_study(1.0, {2.0, 4.0, 8.0, 16.0}, linear_grid(-5.0, 5.0, 41), 1.0, s,
                                                populations(DensityState::coherent_x(s)));
  bool decreasing = true;
  for (std::size_t i = 1; i < st.rows.size(); ++i) {
    decreasing = decreasing && st.rows[i].d_polarimetry < st.rows[i - 1].d_polarimetry &&
                 st.rows[i].d_homodyne < st.rows[i - 1].d_homodyne;
  }
  const bool ok = decreasing && std::abs(st.fitted_rate_polarimetry - 2.0) <= 0.3 &&
                  std::abs(st.fitted_rate_homodyne - 2.0) <= 0.3;
  return {ok, fmt("distances %s; fitted rate polarimetry %.3f, homodyne %.3f (need 2.0 +- 0.3)",
                  decreasing ? "strictly decreasing" : "NOT decreasing", st.fitted_rate_polarimetry,
                  st.fitted_rate_homodyne)};
}

// ---------------------------------------------------------------------------
// 7. Same statistics at strong driving.

Outcome ac7() {
  const ModelParams p = ModelParams::from_strength(SpinSpace::from_twice_j(2), 1.0, 16.0, 1.0, 1e-4);
  const DensityState rho0 = DensityState::coherent_x(p.space);
  const EnsembleSummary pol = ensemble(p, Scheme::polarimetry, rho0, 4000, 701);
  const EnsembleSummary hom = ensemble(p, Scheme::homodyne, rho0, 4000, 702);
  std::vector<double> a, b;
  for (const TerminalSample& t : pol.terminal) a.push_back(t.y_minus);
  for (const TerminalSample& t : hom.terminal) b.push_back(t.photocurrent);
  const KsResult ks = ks_two_sample(a, b);
  return {ks.p_value > 0.01, fmt("KS D = %.4f, p = %.3f (need p > 0.01)", ks.statistic, ks.p_value)};
}

// ---------------------------------------------------------------------------
// 8. Innovations are martingales.

Outcome ac8() {
  bool ok = true;
  double worst_z = 0.0;
  for (const EnsembleSummary& e : tower_ensembles) {
    for (int g = 1; g <= 10; ++g) {
      const std::size_t s = e.sample_at(0.1 * g);
      for (Series series : {Series::innovation_0, Series::innovation_1}) {
        const double m = e.mean(series, s);
        const double se = e.standard_error(series, s);
        if (se == 0.0) {
          ok = ok && m == 0.0;
          continue;
        }
        worst_z = std::max(worst_z, std::abs(m) / se);
        ok = ok && std::abs(m) <= 3.0 * se;
      }
    }
  }
  double worst_qv = 0.0;
  for (double qv : qv_samples) {
    worst_qv = std::max(worst_qv, std::abs(qv - 1.0));
    ok = ok && std::abs(qv - 1.0) <= 0.05;
  }
  ok = ok && !qv_samples.empty();
  return {ok, fmt("max |mean|/SE = %.2f (limit 3); max |QV - T|/T = %.4f over %zu diffusive paths (limit 0.05)",
                  worst_z, worst_qv, qv_samples.size())};
}

// ---------------------------------------------------------------------------
// 9. Conditional squeezing.

Outcome ac9() {
  const ModelParams p = ModelParams::from_strength(SpinSpace::from_twice_j(2), 1.0, 8.0, 1.0, 1e-4);
  const EnsembleSummary e = ensemble(p, Scheme::limit, DensityState::coherent_x(p.space), 2000, 901, 1000);
  const std::size_t last = e.times.size() - 1;
  const double var_t = e.mean(Series::var_fz, last);
  double worst_z = 0.0;
  const double fz0 = e.mean(Series::fz, 0);
  bool flat = true;
  for (std::size_t s = 1; s <= last; ++s) {
    const double z = std::abs(e.mean(Series::fz, s) - fz0) / e.standard_error(Series::fz, s);
    worst_z = std::max(worst_z, z);
    flat = flat && z <= 3.0;
  }
  return {var_t < 0.5 && flat,
          fmt("mean Var(F_z) at T = %.4f (initial 0.5); max |mean F_z - initial|/SE = %.2f (limit 3)", var_t, worst_z)};
}

// ---------------------------------------------------------------------------
// 10. Determinism through the C interface.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  faraday_string_free(s);
  return out;
}

Outcome ac10() {
  const fs::path root = fs::temp_directory_path() / "faraday_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  struct Case {
    const char* command;
    const char* config;
  };
  const Case cases[] = {
      {"ensemble", R"({"J": 1, "T": 0.5, "n_traj": 300, "per_trajectory": true, "record_full_state": true})"},
      {"ensemble", R"({"J": "3/2", "scheme": "limit", "T": 0.5, "n_traj": 300, "per_trajectory": true})"},
      {"charfunc", R"({"J": "1/2", "scheme": "homodyne", "T": 0.5, "n_traj": 500})"},
      {"simulate", R"({"J": 2, "T": 0.5, "record_full_state": true})"},
  };
  bool ok = true;
  int compared = 0;
  for (std::size_t c = 0; c < std::size(cases); ++c) {
    nlohmann::json doc = nlohmann::json::parse(cases[c].config);
    doc["out_dir"] = (root / ("run" + std::to_string(c) + "_t1")).string();
    doc["threads"] = 1;
    faraday_config* cfg = nullptr;
    if (faraday_config_parse(doc.dump().c_str(), &cfg) != FARADAY_OK) return {false, faraday_last_error()};
    int code = -1;
    char* manifest = nullptr;
    if (faraday_run(cfg, cases[c].command, nullptr, &code, &manifest) != FARADAY_OK) return {false, faraday_last_error()};
    faraday_config_free(cfg);
    const nlohmann::json first = nlohmann::json::parse(take(manifest));
    const fs::path manifest_path = fs::path(doc["out_dir"].get<std::string>()) / "manifest.json";
    for (int threads : {1, 3, 8}) {
      const fs::path out = root / ("run" + std::to_string(c) + "_again_t" + std::to_string(threads));
      const nlohmann::json overrides = {{"threads", threads}, {"out_dir", out.string()}};
      faraday_config* again = nullptr;
      if (faraday_config_load(manifest_path.c_str(), overrides.dump().c_str(), &again) != FARADAY_OK) {
        return {false, faraday_last_error()};
      }
      if (faraday_run(again, cases[c].command, nullptr, &code, &manifest) != FARADAY_OK) {
        return {false, faraday_last_error()};
      }
      faraday_config_free(again);
      const nlohmann::json second = nlohmann::json::parse(take(manifest));
      ok = ok && second["files"] == first["files"];
      for (const auto& item : first["files"].items()) {
        ok = ok && slurp(out / item.key()) == slurp(fs::path(doc["out_dir"].get<std::string>()) / item.key());
        ++compared;
      }
    }
  }
  fs::remove_all(root);
  return {ok, fmt("%d CSV files byte-compared across re-runs from the manifest at 1, 3 and 8 threads", compared)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_seconds;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, 1.0, ac1},   {2, 60.0, ac2},  {3, 300.0, ac3}, {4, 60.0, ac4}, {5, 300.0, ac5},
      {6, 10.0, ac6},  {7, 300.0, ac7}, {8, 0.0, ac8},   {9, 0.0, ac9},  {10, 0.0, ac10},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_seconds > 0.0) {
      timing += fmt(" of %.0f s", c.budget_seconds);
      if (secs >= c.budget_seconds) {
        o.pass = false;
        o.detail += "; over the runtime budget";
      }
    }
    failures += o.pass ? 0 : 1;
    std::printf("AC%d %s  %s  [%s]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
