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

// Command-line front end. Links only the C interface.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "faraday/faraday.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::optional<std::string> j;
  std::optional<double> alpha, kappa, m, phi, gamma_b, horizon, dt;
  std::optional<std::string> scheme, mode, generator, process, initial_state, out_dir;
  std::optional<long long> n_traj, threads, sample_every, check_points;
  std::optional<unsigned long long> base_seed;
  bool full_state = false;
  bool per_trajectory = false;
  std::vector<std::string> set;

  nlohmann::json to_json() const {
    nlohmann::json o = nlohmann::json::object();
    auto put = [&o](const char* key, const auto& v) {
      if (v) o[key] = *v;
    };
    put("J", j);
    put("alpha", alpha);
    put("kappa", kappa);
    put("M", m);
    put("phi", phi);
    put("gamma_b", gamma_b);
    put("T", horizon);
    put("dt", dt);
    put("scheme", scheme);
    put("mode", mode);
    put("generator", generator);
    put("process", process);
    put("initial_state", initial_state);
    put("out_dir", out_dir);
    put("n_traj", n_traj);
    put("threads", threads);
    put("sample_every", sample_every);
    put("check_points", check_points);
    put("base_seed", base_seed);
    if (full_state) o["record_full_state"] = true;
    if (per_trajectory) o["per_trajectory"] = true;
    for (const std::string& kv : set) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const std::string text = kv.substr(eq + 1);
      try {
        o[key] = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error&) {
        o[key] = text;
      }
    }
    return o;
  }
};

void add_common(CLI::App* cmd, Overrides& ov, std::string& config_path) {
  cmd->add_option("-c,--config", config_path, "JSON config or a run manifest to reproduce");
  cmd->add_option("-o,--out", ov.out_dir, "Output directory (default: $FARADAY_OUT or ./faraday_out)");
  cmd->add_option("--J", ov.j, "Spin magnitude, e.g. 1/2, 1, 3/2");
  cmd->add_option("--alpha", ov.alpha, "Drive amplitude");
  cmd->add_option("--kappa", ov.kappa, "Rotation angle per photon");
  cmd->add_option("--M", ov.m, "Measurement strength alpha^2 kappa^2");
  cmd->add_option("--phi", ov.phi, "Drive phase");
  cmd->add_option("--gamma-b", ov.gamma_b, "Field rate of the gamma_b F_y term");
  cmd->add_option("-T,--horizon", ov.horizon, "Time horizon");
  cmd->add_option("--dt", ov.dt, "Time step");
  cmd->add_option("--scheme", ov.scheme, "polarimetry | homodyne | limit");
  cmd->add_option("--mode", ov.mode, "normalized | linear");
  cmd->add_option("--initial", ov.initial_state, "coherent_x | mixed");
  cmd->add_option("--seed", ov.base_seed, "Base seed");
  cmd->add_option("--set", ov.set, "Any config key as key=<json value>; repeatable");
}

int status_exit(faraday_status s) {
  if (s == FARADAY_OK) return kExitOk;
  const std::string field = faraday_last_error_field();
  std::fprintf(stderr, "faraday: %s: %s\n", faraday_status_string(s), faraday_last_error());
  if (!field.empty()) std::fprintf(stderr, "faraday: offending field: %s\n", field.c_str());
  return s == FARADAY_ERR_CONFIG || s == FARADAY_ERR_INVALID_ARGUMENT ? kExitUsage : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum filters for polarimetry and homodyne detection of a Faraday-coupled spin ensemble"};
  app.set_version_flag("--version", std::string(faraday_version()));
  char* reference = nullptr;
  if (faraday_csv_reference(&reference) == FARADAY_OK) {
    app.footer(std::string("\nExit codes: 0 ok, 1 invariant breach, 2 usage or configuration error.\n"
                           "Environment: FARADAY_OUT sets the default output directory.\n\n") +
               reference);
    faraday_string_free(reference);
  }
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  std::string record_path;
  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {"simulate", "One co-simulated trajectory (record and filter)"},
      {"ensemble", "Ensemble summary over n_traj trajectories"},
      {"master", "Unconditional master equation"},
      {"charfunc", "Analytic and empirical characteristic functionals"},
      {"converge", "Strong-driving convergence table (analytic)"},
      {"check-unitarity", "Unitarity defects of the QSDE generators"},
      {"replay", "Run the filter over a recorded observation CSV"},
  };
  for (const Spec& s : specs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, ov, config_path);
    const std::string name = s.name;
    if (name == "ensemble" || name == "charfunc") {
      cmd->add_option("-n,--n-traj", ov.n_traj, "Number of trajectories");
      cmd->add_option("--threads", ov.threads, "Worker threads (results do not depend on it)");
      cmd->add_option("--sample-every", ov.sample_every, "Grid stride of the summary rows");
    }
    if (name == "ensemble") cmd->add_flag("--per-trajectory", ov.per_trajectory, "Also write terminal.csv");
    if (name == "simulate" || name == "ensemble" || name == "replay") {
      cmd->add_flag("--full-state", ov.full_state, "Write full density matrices");
    }
    if (name == "master") cmd->add_option("--generator", ov.generator, "finite | limit");
    if (name == "charfunc") cmd->add_option("--process", ov.process, "plus | minus | homodyne | limit");
    if (name == "check-unitarity") cmd->add_option("--points", ov.check_points, "Random parameter points");
    if (name == "replay") cmd->add_option("-r,--record", record_path, "Observation CSV (event, dy columns)")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fprintf(stderr, "\n%s", app.help().c_str());
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  nlohmann::json overrides;
  try {
    overrides = ov.to_json();
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "faraday: %s\n", e.what());
    return kExitUsage;
  }

  faraday_config* config = nullptr;
  const std::string over_text = overrides.dump();
  faraday_status st = faraday_config_load(config_path.empty() ? nullptr : config_path.c_str(), over_text.c_str(), &config);
  if (st != FARADAY_OK) return status_exit(st);

  int exit_code = 0;
  char* manifest = nullptr;
  st = faraday_run(config, command.c_str(), record_path.empty() ? nullptr : record_path.c_str(), &exit_code, &manifest);
  faraday_config_free(config);
  if (st != FARADAY_OK) return status_exit(st);

  const nlohmann::json m = nlohmann::json::parse(manifest);
  faraday_string_free(manifest);
  std::printf("%s: %s\n", command.c_str(), m["summary"].dump().c_str());
  for (const auto& f : m["files"].items()) {
    std::printf("  %s  fnv1a64=%s\n", f.key().c_str(), f.value()["fnv1a64"].get<std::string>().c_str());
  }
  if (exit_code != 0) std::fprintf(stderr, "faraday: %s reported an invariant breach\n", command.c_str());
  return exit_code == 0 ? kExitOk : kExitInvariant;
}
