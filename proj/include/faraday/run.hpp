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

// Command dispatch and file output. Every command writes its CSV files and a
// manifest.json (resolved config, tool version, RNG identifier, wall clock,
// FNV-1a-64 checksums of the CSV outputs) into the output directory.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "faraday/config.hpp"

namespace faraday {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command { simulate, ensemble, master, charfunc, converge, check_unitarity, replay };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

struct RunRequest {
  Command command = Command::simulate;
  RunConfig config;
  /// Observation CSV for `replay` (columns include `event` and `dy`).
  std::string record_path;
};

struct RunResult {
  /// 0 ok, 1 invariant breach detected by the command's own checks.
  int exit_code = 0;
  std::vector<std::string> files;
  nlohmann::json manifest;
  std::string summary;
};

/// Runs one command. Throws DomainError / ConfigError on invalid input and
/// InvariantError when a computation breaches an invariant.
RunResult run(const RunRequest& request);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Shortest decimal text that round-trips (17 significant digits).
std::string format_double(double x);

/// Column layout of every CSV, as printed by `--help`.
std::string csv_reference();

}  // namespace faraday
