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

#include "faraday/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "faraday/error.hpp"

namespace faraday {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "J",         "alpha",         "kappa",          "M",           "phi",       "gamma_b",     "T",
    "dt",        "alpha_schedule", "scheme",        "mode",        "generator", "process",     "initial_state",
    "n_traj",    "base_seed",     "threads",        "sample_every", "record_full_state", "per_trajectory", "out_dir",
    "k_grid",    "alphas",        "test_function",  "check_points"};

double get_number(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

std::uint64_t get_count(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(key, "expected a nonnegative integer");
}

bool get_bool(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

template <typename F>
auto as_field(const char* key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

std::string spin_text(const SpinSpace& s) {
  return s.twice_j() % 2 == 0 ? std::to_string(s.twice_j() / 2) : std::to_string(s.twice_j()) + "/2";
}

}  // namespace

SpinSpace parse_spin(const json& value) {
  if (value.is_number()) return as_field("J", [&] { return SpinSpace::from_j(value.get<double>()); });
  if (!value.is_string()) throw ConfigError("J", "expected a number or a string such as \"1/2\"");
  const std::string text = value.get<std::string>();
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return SpinSpace::from_j(std::stod(text));
    const int num = std::stoi(text.substr(0, slash));
    const int den = std::stoi(text.substr(slash + 1));
    if (den == 2) return SpinSpace::from_twice_j(num);
    if (den == 1) return SpinSpace::from_twice_j(2 * num);
  } catch (const std::exception&) {
  }
  throw ConfigError("J", "cannot parse '" + text + "' as a positive half-integer");
}

DensityState RunConfig::initial_state() const {
  if (initial.kind == "coherent_x") return DensityState::coherent_x(params.space);
  if (initial.kind == "mixed") return DensityState::maximally_mixed(params.space);
  const double idx = params.space.j() - initial.m;
  return DensityState::fz_eigenstate(params.space, static_cast<int>(std::lround(idx)));
}

RealVector RunConfig::initial_populations() const { return initial_state().populations(); }

json RunConfig::to_json() const {
  json j;
  j["J"] = spin_text(params.space);
  j["alpha"] = params.alpha;
  j["kappa"] = params.kappa;
  j["M"] = params.measurement_strength;
  j["phi"] = params.phi;
  j["gamma_b"] = params.gamma_b;
  j["T"] = params.horizon;
  j["dt"] = params.dt;
  json sched = json::array();
  for (const AlphaPiece& p : params.alpha_schedule) sched.push_back({p.start, p.alpha});
  j["alpha_schedule"] = sched;
  j["scheme"] = std::string(scheme_name(scheme));
  j["mode"] = std::string(mode_name(mode));
  j["generator"] = std::string(generator_kind_name(generator));
  j["process"] = std::string(process_name(process));
  if (initial.kind == "fz_eigen") {
    j["initial_state"] = {{"kind", "fz_eigen"}, {"m", initial.m}};
  } else {
    j["initial_state"] = initial.kind;
  }
  j["n_traj"] = n_traj;
  j["base_seed"] = base_seed;
  j["threads"] = threads;
  j["sample_every"] = sample_every;
  j["record_full_state"] = record_full_state;
  j["per_trajectory"] = per_trajectory;
  j["out_dir"] = out_dir;
  j["k_grid"] = {{"min", k_grid.min}, {"max", k_grid.max}, {"n", k_grid.n}};
  j["alphas"] = alphas;
  if (test_function) {
    j["test_function"] = {{"knots", test_function->knots()}, {"values", test_function->values()}};
  }
  j["check_points"] = check_points;
  return j;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& item : doc.items()) {
    if (!kKnownKeys.count(item.key())) throw ConfigError(item.key(), "unknown key");
  }
  RunConfig c;
  ModelParams& p = c.params;
  p.space = doc.contains("J") ? as_field("J", [&] { return parse_spin(doc["J"]); }) : SpinSpace::from_twice_j(1);
  if (doc.contains("scheme")) c.scheme = as_field("scheme", [&] { return parse_scheme(get_string(doc, "scheme")); });
  if (doc.contains("mode")) c.mode = as_field("mode", [&] { return parse_mode(get_string(doc, "mode")); });
  c.generator = c.scheme == Scheme::limit ? GeneratorKind::limit : GeneratorKind::finite_alpha;
  if (doc.contains("generator")) {
    c.generator = as_field("generator", [&] { return parse_generator_kind(get_string(doc, "generator")); });
  }
  c.process = c.scheme == Scheme::homodyne ? Process::homodyne
              : c.scheme == Scheme::limit  ? Process::limit
                                           : Process::minus;
  if (doc.contains("process")) {
    c.process = as_field("process", [&] { return parse_process(get_string(doc, "process")); });
  }

  // alpha, kappa, M: any two fix the third.
  const bool has_a = doc.contains("alpha"), has_k = doc.contains("kappa"), has_m = doc.contains("M");
  double alpha = has_a ? get_number(doc, "alpha") : 4.0;
  double kappa = has_k ? get_number(doc, "kappa") : 0.25;
  if (alpha < 0.0) throw ConfigError("alpha", "must be nonnegative");
  if (has_m) {
    const double m = get_number(doc, "M");
    if (m < 0.0) throw ConfigError("M", "must be nonnegative");
    if (has_a && has_k) {
      const double implied = alpha * alpha * kappa * kappa;
      if (std::abs(m - implied) > 1e-9 * std::max(1.0, m)) {
        std::ostringstream os;
        os.precision(17);
        os << "M = " << m << " conflicts with alpha^2 kappa^2 = " << implied;
        throw ConfigError("M", os.str());
      }
    } else if (has_k && !has_a) {
      if (kappa == 0.0) throw ConfigError("kappa", "cannot derive alpha from M with kappa = 0");
      alpha = std::sqrt(m) / std::abs(kappa);
    } else {
      if (!(alpha > 0.0)) throw ConfigError("alpha", "must be positive to derive kappa from M");
      kappa = std::sqrt(m) / alpha;
    }
  }
  p.alpha = alpha;
  p.kappa = kappa;
  p.measurement_strength = alpha * alpha * kappa * kappa;

  if (doc.contains("phi")) p.phi = get_number(doc, "phi");
  if (doc.contains("gamma_b")) p.gamma_b = get_number(doc, "gamma_b");
  p.horizon = doc.contains("T") ? get_number(doc, "T") : 1.0;
  p.dt = doc.contains("dt") ? get_number(doc, "dt") : 1e-3;
  if (doc.contains("alpha_schedule")) {
    const json& s = doc["alpha_schedule"];
    if (!s.is_array()) throw ConfigError("alpha_schedule", "expected [[start, alpha], ...]");
    for (const json& piece : s) {
      if (!piece.is_array() || piece.size() != 2 || !piece[0].is_number() || !piece[1].is_number()) {
        throw ConfigError("alpha_schedule", "each piece must be [start, alpha]");
      }
      p.alpha_schedule.push_back({piece[0].get<double>(), piece[1].get<double>()});
    }
  }
  as_field("params", [&] {
    p.validate();
    return 0;
  });
  if (c.scheme == Scheme::polarimetry) {
    const double a = p.max_alpha();
    if (a * a * p.dt > kMaxJumpProbability) {
      std::ostringstream os;
      os << "polarimetry needs alpha^2 dt <= " << kMaxJumpProbability << " (got " << a * a * p.dt << ")";
      throw ConfigError("dt", os.str());
    }
  }

  if (doc.contains("initial_state")) {
    const json& s = doc["initial_state"];
    if (s.is_string()) {
      c.initial.kind = s.get<std::string>();
    } else if (s.is_object()) {
      for (const auto& item : s.items()) {
        if (item.key() != "kind" && item.key() != "m") throw ConfigError("initial_state." + item.key(), "unknown key");
      }
      if (!s.contains("kind")) throw ConfigError("initial_state.kind", "missing");
      c.initial.kind = get_string(s, "kind");
      if (s.contains("m")) c.initial.m = get_number(s, "m");
    } else {
      throw ConfigError("initial_state", "expected a string or an object");
    }
    if (c.initial.kind != "coherent_x" && c.initial.kind != "mixed" && c.initial.kind != "fz_eigen") {
      throw ConfigError("initial_state", "unknown kind '" + c.initial.kind + "' (coherent_x, mixed or fz_eigen)");
    }
    if (c.initial.kind == "fz_eigen") {
      const double idx = p.space.j() - c.initial.m;
      if (std::abs(idx - std::round(idx)) > 1e-12 || idx < 0 || idx > p.space.twice_j()) {
        throw ConfigError("initial_state.m", "not an F_z eigenvalue for this J");
      }
    }
  }

  if (doc.contains("n_traj")) c.n_traj = get_count(doc, "n_traj");
  if (c.n_traj == 0) throw ConfigError("n_traj", "must be positive");
  if (doc.contains("base_seed")) c.base_seed = get_count(doc, "base_seed");
  if (doc.contains("threads")) c.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, get_count(doc, "threads")));
  if (doc.contains("sample_every")) c.sample_every = get_count(doc, "sample_every");
  if (doc.contains("record_full_state")) c.record_full_state = get_bool(doc, "record_full_state");
  if (doc.contains("per_trajectory")) c.per_trajectory = get_bool(doc, "per_trajectory");
  if (doc.contains("out_dir")) {
    c.out_dir = get_string(doc, "out_dir");
  } else if (const char* env = std::getenv("FARADAY_OUT"); env && *env) {
    c.out_dir = env;
  }
  if (doc.contains("k_grid")) {
    const json& g = doc["k_grid"];
    if (!g.is_object()) throw ConfigError("k_grid", "expected {min, max, n}");
    for (const auto& item : g.items()) {
      if (item.key() != "min" && item.key() != "max" && item.key() != "n") {
        throw ConfigError("k_grid." + item.key(), "unknown key");
      }
    }
    if (g.contains("min")) c.k_grid.min = get_number(g, "min");
    if (g.contains("max")) c.k_grid.max = get_number(g, "max");
    if (g.contains("n")) c.k_grid.n = get_count(g, "n");
    if (c.k_grid.n == 0 || c.k_grid.max < c.k_grid.min) throw ConfigError("k_grid", "need n >= 1 and min <= max");
  }
  if (doc.contains("alphas")) {
    const json& a = doc["alphas"];
    if (!a.is_array() || a.empty()) throw ConfigError("alphas", "expected a nonempty array");
    c.alphas.clear();
    for (const json& v : a) {
      if (!v.is_number()) throw ConfigError("alphas", "expected numbers");
      c.alphas.push_back(v.get<double>());
    }
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
      if (!(c.alphas[i] > 0.0) || (i > 0 && !(c.alphas[i] > c.alphas[i - 1]))) {
        throw ConfigError("alphas", "must be positive and strictly increasing");
      }
    }
  }
  if (doc.contains("test_function")) {
    const json& tf = doc["test_function"];
    if (!tf.is_object() || !tf.contains("knots") || !tf.contains("values")) {
      throw ConfigError("test_function", "expected {knots, values}");
    }
    c.test_function = as_field("test_function", [&] {
      return TestFunction(tf["knots"].get<std::vector<double>>(), tf["values"].get<std::vector<double>>());
    });
    if (std::abs(c.test_function->horizon() - p.horizon) > 1e-9 * p.horizon) {
      throw ConfigError("test_function", "last knot must equal T");
    }
    if (!c.test_function->aligned_with(p.dt)) throw ConfigError("test_function", "knots must lie on the dt grid");
  }
  if (doc.contains("check_points")) c.check_points = static_cast<int>(get_count(doc, "check_points"));
  return c;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON in '") + path + "': " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("tool_version")) return doc["config"];
  return doc;
}

json merge_config(json base, const json& overrides) {
  if (!base.is_object()) base = json::object();
  for (const auto& item : overrides.items()) base[item.key()] = item.value();
  return base;
}

}  // namespace faraday
