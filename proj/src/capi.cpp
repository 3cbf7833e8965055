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

#include "faraday/faraday.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "faraday/config.hpp"
#include "faraday/error.hpp"
#include "faraday/filters.hpp"
#include "faraday/ito_calculus.hpp"
#include "faraday/run.hpp"

struct faraday_config {
  faraday::RunConfig config;
};

struct faraday_filter {
  faraday::Filter filter;
  faraday::FilterState state;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_field;

faraday_status fail(faraday_status status, const std::string& message, const std::string& field = {}) {
  last_error = message;
  last_field = field;
  return status;
}

template <typename F>
faraday_status guarded(F&& body) {
  last_error.clear();
  last_field.clear();
  try {
    body();
    return FARADAY_OK;
  } catch (const faraday::ConfigError& e) {
    return fail(FARADAY_ERR_CONFIG, e.what(), e.field());
  } catch (const faraday::DomainError& e) {
    return fail(FARADAY_ERR_INVALID_ARGUMENT, e.what());
  } catch (const faraday::InvariantError& e) {
    return fail(FARADAY_ERR_INVARIANT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(FARADAY_ERR_CONFIG, e.what(), "config");
  } catch (const std::bad_alloc&) {
    return fail(FARADAY_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FARADAY_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw faraday::DomainError(std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* faraday_version(void) { return "0.1.0"; }

const char* faraday_status_string(faraday_status status) {
  switch (status) {
    case FARADAY_OK: return "ok";
    case FARADAY_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FARADAY_ERR_CONFIG: return "configuration error";
    case FARADAY_ERR_INVARIANT: return "invariant breach";
    case FARADAY_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* faraday_last_error(void) { return last_error.c_str(); }
const char* faraday_last_error_field(void) { return last_field.c_str(); }
void faraday_string_free(char* s) { std::free(s); }

faraday_status faraday_config_parse(const char* json_text, faraday_config** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = nullptr;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw faraday::ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("config") && doc.contains("tool_version")) doc = doc["config"];
    *out = new faraday_config{faraday::parse_config(doc)};
  });
}

faraday_status faraday_config_load(const char* path, const char* overrides_json, faraday_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    nlohmann::json doc = path ? faraday::read_config_file(path) : nlohmann::json::object();
    if (overrides_json) {
      nlohmann::json over;
      try {
        over = nlohmann::json::parse(overrides_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw faraday::ConfigError("overrides", std::string("malformed JSON: ") + e.what());
      }
      if (!over.is_object()) throw faraday::ConfigError("overrides", "expected a JSON object");
      doc = faraday::merge_config(std::move(doc), over);
    }
    *out = new faraday_config{faraday::parse_config(doc)};
  });
}

faraday_status faraday_config_to_json(const faraday_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = dup_string(config->config.to_json().dump(2));
  });
}

void faraday_config_free(faraday_config* config) { delete config; }

faraday_status faraday_run(const faraday_config* config, const char* command, const char* record_path,
                           int* exit_code, char** manifest_json) {
  return guarded([&] {
    require(config, "config");
    require(command, "command");
    require(exit_code, "exit_code");
    faraday::RunRequest req;
    req.command = faraday::parse_command(command);
    req.config = config->config;
    if (record_path) req.record_path = record_path;
    const faraday::RunResult result = faraday::run(req);
    *exit_code = result.exit_code;
    if (manifest_json) *manifest_json = dup_string(result.manifest.dump(2));
  });
}

faraday_status faraday_csv_reference(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(faraday::csv_reference());
  });
}

faraday_status faraday_filter_create(const faraday_config* config, faraday_filter** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    const faraday::RunConfig& c = config->config;
    faraday::Filter filter(c.params, c.scheme);
    faraday::FilterState state = faraday::FilterState::start(c.initial_state(), c.scheme, c.mode);
    *out = new faraday_filter{std::move(filter), std::move(state)};
  });
}

faraday_status faraday_filter_step_count(faraday_filter* filter, faraday_event event) {
  return guarded([&] {
    require(filter, "filter");
    if (event < FARADAY_EVENT_NONE || event > FARADAY_EVENT_ETA) throw faraday::DomainError("unknown count event");
    if (filter->filter.scheme() != faraday::Scheme::polarimetry) {
      throw faraday::DomainError("count steps need a polarimetry filter");
    }
    const auto obs = faraday::ObservationIncrement::count(static_cast<faraday::CountEvent>(event),
                                                          filter->filter.params().dt);
    filter->filter.step(filter->state, obs);
  });
}

faraday_status faraday_filter_step_diffusive(faraday_filter* filter, double dy) {
  return guarded([&] {
    require(filter, "filter");
    if (filter->filter.scheme() == faraday::Scheme::polarimetry) {
      throw faraday::DomainError("photocurrent steps need a homodyne or limit filter");
    }
    filter->filter.step(filter->state, faraday::ObservationIncrement::diffusive(dy, filter->filter.params().dt));
  });
}

faraday_status faraday_filter_moments(const faraday_filter* filter, faraday_moments* out) {
  return guarded([&] {
    require(filter, "filter");
    require(out, "out");
    const faraday::Moments m = filter->filter.moments(filter->state.rho);
    *out = {filter->state.t, m.fx, m.fy, m.fz, m.fz2, m.var_fz, m.purity, filter->state.log_likelihood};
  });
}

faraday_status faraday_filter_state(const faraday_filter* filter, double* out, size_t capacity, size_t* dim) {
  return guarded([&] {
    require(filter, "filter");
    require(dim, "dim");
    const faraday::Matrix& rho = filter->state.rho;
    const auto n = static_cast<size_t>(rho.rows());
    *dim = n;
    if (!out) return;
    if (capacity < 2 * n * n) throw faraday::DomainError("state buffer needs 2 (2J+1)^2 doubles");
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        const faraday::Complex z = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out[2 * (i * n + j)] = z.real();
        out[2 * (i * n + j) + 1] = z.imag();
      }
    }
  });
}

void faraday_filter_free(faraday_filter* filter) { delete filter; }

faraday_status faraday_check_unitarity_json(const faraday_config* config, const char* generator, const char* basis,
                                            double t, char** out) {
  return guarded([&] {
    require(config, "config");
    require(generator, "generator");
    require(out, "out");
    namespace ito = faraday::ito;
    const ito::ChannelBasis b = ito::parse_basis(basis ? basis : "xy");
    const ito::QNoiseExpr g = ito::qsde_coefficients(generator, config->config.params, t);
    const ito::BasisView v = ito::basis_change(g, b);
    const auto labels = ito::channel_labels(b);
    nlohmann::json coeffs = nlohmann::json::object();
    coeffs["dt"] = faraday::matrix_to_json(v.time);
    for (int i = 0; i < 2; ++i) {
      coeffs["dA^" + std::string(labels[i])] = faraday::matrix_to_json(v.annihilation[i]);
      coeffs["dA^" + std::string(labels[i]) + "*"] = faraday::matrix_to_json(v.creation[i]);
      for (int j = 0; j < 2; ++j) {
        coeffs["dLambda^" + std::string(labels[i]) + std::string(labels[j])] = faraday::matrix_to_json(v.gauge[i][j]);
      }
    }
    nlohmann::json doc = {{"generator", generator},
                          {"basis", std::string(ito::basis_name(b))},
                          {"t", t},
                          {"unitarity_defect", ito::unitarity_defect(g).max_norm()},
                          {"coefficients", coeffs}};
    *out = dup_string(doc.dump(2));
  });
}

}  // extern "C"
