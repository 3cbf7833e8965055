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

// Run configuration: a JSON object with the keys below. Unknown keys are
// rejected. A run manifest is also accepted; its "config" member is used.
//
//   J               spin magnitude, number or string ("1/2", "3/2", "2")
//   alpha, kappa, M drive amplitude, rotation per photon, strength; any two
//                   determine the third and all three must agree
//   phi, gamma_b    drive phase, field rate
//   T, dt           horizon and step (T a multiple of dt)
//   alpha_schedule  [[start, alpha], ...] piecewise-constant drive
//   scheme          polarimetry | homodyne | limit
//   mode            normalized | linear
//   generator       finite | limit (master; default follows scheme)
//   process         plus | minus | homodyne | limit (charfunc; default follows scheme)
//   initial_state   "coherent_x" | "mixed" | {"kind": "fz_eigen", "m": m}
//   n_traj, base_seed, threads, sample_every, record_full_state,
//   per_trajectory, out_dir, k_grid {min, max, n}, alphas [...],
//   test_function {knots, values}, check_points

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "faraday/filters.hpp"
#include "faraday/generators.hpp"
#include "faraday/model.hpp"
#include "faraday/statistics.hpp"
#include "faraday/test_function.hpp"

namespace faraday {

struct KGrid {
  double min = -5.0;
  double max = 5.0;
  std::size_t n = 41;
  std::vector<double> values() const { return linear_grid(min, max, n); }
};

struct InitialStateSpec {
  std::string kind = "coherent_x";  // coherent_x | mixed | fz_eigen
  double m = 0.0;
};

struct RunConfig {
  ModelParams params;
  Scheme scheme = Scheme::polarimetry;
  FilterMode mode = FilterMode::normalized;
  GeneratorKind generator = GeneratorKind::finite_alpha;
  Process process = Process::minus;
  InitialStateSpec initial;
  std::size_t n_traj = 1000;
  std::uint64_t base_seed = 1;
  unsigned threads = 1;
  std::size_t sample_every = 0;
  bool record_full_state = false;
  bool per_trajectory = false;
  std::string out_dir = "faraday_out";
  KGrid k_grid;
  std::vector<double> alphas{2.0, 4.0, 8.0, 16.0};
  std::optional<TestFunction> test_function;
  int check_points = 100;

  DensityState initial_state() const;
  /// Diagonal of the initial state in the F_z basis.
  RealVector initial_populations() const;
  /// The fully resolved configuration; parse_config(to_json()) reproduces it.
  nlohmann::json to_json() const;
};

/// Applies defaults and validates. Throws ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& doc);
/// Reads a config or manifest file.
nlohmann::json read_config_file(const std::string& path);
/// Shallow merge: keys of `overrides` replace those of `base`.
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overrides);

/// Parses J from "1/2"-style text or a decimal number.
SpinSpace parse_spin(const nlohmann::json& value);

}  // namespace faraday
