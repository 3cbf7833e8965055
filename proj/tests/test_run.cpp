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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "faraday/error.hpp"
#include "faraday/run.hpp"

using namespace faraday;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
  double num(std::size_t row, const std::string& name) const { return std::stod(rows[row][column(name)]); }
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  Table t;
  std::string line;
  std::getline(in, line);
  t.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty()) t.rows.push_back(split(line));
  }
  return t;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("faraday_run_test_" + name);
  fs::remove_all(d);
  return d;
}

RunResult run_cmd(Command cmd, json doc, const fs::path& dir, const std::string& record = "") {
  doc["out_dir"] = dir.string();
  RunRequest req;
  req.command = cmd;
  req.config = parse_config(doc);
  req.record_path = record;
  return run(req);
}

}  // namespace

TEST_CASE("FNV-1a reference vectors") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("command names") {
  CHECK(parse_command("check-unitarity") == Command::check_unitarity);
  CHECK(command_name(Command::replay) == "replay");
  CHECK_THROWS_AS(parse_command("frobnicate"), DomainError);
  CHECK(csv_reference().find("master.csv") != std::string::npos);
}

TEST_CASE("master command follows the dephasing closed form") {
  const fs::path d = scratch("master");
  const RunResult r =
      run_cmd(Command::master, {{"J", "1/2"}, {"M", 1.0}, {"scheme", "limit"}, {"T", 1.0}, {"dt", 1e-3}}, d);
  CHECK(r.exit_code == 0);
  const Table t = read_csv(d / "master.csv");
  REQUIRE(t.rows.size() == 1001);
  for (std::size_t k : {0u, 250u, 1000u}) {
    const double time = t.num(k, "t");
    CHECK(std::abs(t.num(k, "fx") - 0.5 * std::exp(-0.5 * time)) < 1e-10);
    CHECK(std::abs(t.num(k, "trace") - 1.0) < 1e-12);
  }
  fs::remove_all(d);
}

TEST_CASE("manifest records checksums of every output") {
  const fs::path d = scratch("unitarity");
  const RunResult r = run_cmd(Command::check_unitarity, {{"check_points", 10}}, d);
  CHECK(r.exit_code == 0);
  const json m = json::parse(slurp(d / "manifest.json"));
  CHECK(m["tool_version"] == std::string(kToolVersion));
  CHECK(m["command"] == "check-unitarity");
  CHECK(m["exit_code"] == 0);
  for (const std::string name : {"unitarity.csv", "unitarity.json"}) {
    const std::string bytes = slurp(d / name);
    CHECK(m["files"][name]["fnv1a64"] == hex64(fnv1a64(bytes)));
    CHECK(m["files"][name]["bytes"] == bytes.size());
  }
  CHECK(parse_config(m["config"]).check_points == 10);
  fs::remove_all(d);
}

TEST_CASE("simulate is reproducible and replays exactly") {
  const json cfg = {{"J", 1}, {"scheme", "homodyne"}, {"T", 0.2}, {"base_seed", 4}};
  const fs::path a = scratch("sim_a"), b = scratch("sim_b"), c = scratch("sim_c");
  run_cmd(Command::simulate, cfg, a);
  run_cmd(Command::simulate, cfg, b);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  const RunResult rr = run_cmd(Command::replay, cfg, c, (a / "trajectory.csv").string());
  CHECK(rr.exit_code == 0);
  const Table orig = read_csv(a / "trajectory.csv");
  const Table again = read_csv(c / "replay.csv");
  REQUIRE(orig.rows.size() == again.rows.size());
  for (std::size_t k = 0; k < orig.rows.size(); ++k) {
    CHECK(orig.num(k, "fz") == again.num(k, "fz"));
    CHECK(orig.num(k, "y") == again.num(k, "y"));
  }
  CHECK_THROWS_AS(run_cmd(Command::replay, cfg, c, (c / "missing.csv").string()), ConfigError);
  for (const auto& p : {a, b, c}) fs::remove_all(p);
}

TEST_CASE("ensemble output is independent of the thread count") {
  const json cfg = {{"J", 1}, {"T", 0.2}, {"n_traj", 64}, {"per_trajectory", true}};
  const fs::path a = scratch("ens_a"), b = scratch("ens_b");
  json c1 = cfg, c4 = cfg;
  c1["threads"] = 1;
  c4["threads"] = 4;
  const RunResult r1 = run_cmd(Command::ensemble, c1, a);
  const RunResult r4 = run_cmd(Command::ensemble, c4, b);
  CHECK(r1.manifest["files"] == r4.manifest["files"]);
  CHECK(r1.manifest["files"].contains("terminal.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}
