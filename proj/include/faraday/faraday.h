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

#ifndef FARADAY_FARADAY_H_
#define FARADAY_FARADAY_H_

/* C interface to the faraday library. Handles are opaque; every function
 * returns a faraday_status and reports details through faraday_last_error(),
 * which is per thread. Strings returned through char** are owned by the
 * caller and released with faraday_string_free(). */

#include <stddef.h>

#if defined(FARADAY_BUILDING_LIBRARY)
#define FARADAY_API __attribute__((visibility("default")))
#else
#define FARADAY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum faraday_status {
  FARADAY_OK = 0,
  FARADAY_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad name, precondition */
  FARADAY_ERR_CONFIG = 2,           /* schema violation; see faraday_last_error_field() */
  FARADAY_ERR_INVARIANT = 3,        /* numerical or physical invariant breached */
  FARADAY_ERR_INTERNAL = 4
} faraday_status;

typedef enum faraday_event { FARADAY_EVENT_NONE = 0, FARADAY_EVENT_XI = 1, FARADAY_EVENT_ETA = 2 } faraday_event;

typedef struct faraday_config faraday_config;
typedef struct faraday_filter faraday_filter;

typedef struct faraday_moments {
  double t;
  double fx;
  double fy;
  double fz;
  double fz2;
  double var_fz;
  double purity;
  double log_likelihood;
} faraday_moments;

FARADAY_API const char* faraday_version(void);
FARADAY_API const char* faraday_status_string(faraday_status status);
/* Message of the last failed call on this thread ("" if none). */
FARADAY_API const char* faraday_last_error(void);
/* Config field that caused the last FARADAY_ERR_CONFIG ("" otherwise). */
FARADAY_API const char* faraday_last_error_field(void);
FARADAY_API void faraday_string_free(char* s);

/* Parses a JSON config. A run manifest is accepted as well. */
FARADAY_API faraday_status faraday_config_parse(const char* json_text, faraday_config** out);
/* Reads a config or manifest file; keys of overrides_json (may be NULL)
 * replace those of the file. A NULL path starts from the defaults. */
FARADAY_API faraday_status faraday_config_load(const char* path, const char* overrides_json, faraday_config** out);
/* Fully resolved config as JSON. */
FARADAY_API faraday_status faraday_config_to_json(const faraday_config* config, char** out);
FARADAY_API void faraday_config_free(faraday_config* config);

/* Runs a command: simulate, ensemble, master, charfunc, converge,
 * check-unitarity or replay (record_path names the observation CSV).
 * *exit_code is 0 on success and 1 when the command's own checks fail.
 * manifest_json (may be NULL) receives the manifest. */
FARADAY_API faraday_status faraday_run(const faraday_config* config, const char* command, const char* record_path,
                                       int* exit_code, char** manifest_json);

/* CSV column reference. */
FARADAY_API faraday_status faraday_csv_reference(char** out);

/* Incremental filter driven by externally supplied observations. Uses the
 * config's scheme, mode, parameters and initial state. */
FARADAY_API faraday_status faraday_filter_create(const faraday_config* config, faraday_filter** out);
FARADAY_API faraday_status faraday_filter_step_count(faraday_filter* filter, faraday_event event);
FARADAY_API faraday_status faraday_filter_step_diffusive(faraday_filter* filter, double dy);
FARADAY_API faraday_status faraday_filter_moments(const faraday_filter* filter, faraday_moments* out);
/* Copies the unit-trace state, row-major, as interleaved (re, im) pairs.
 * With out == NULL only *dim is set.
 * capacity counts doubles; *dim receives 2J+1. */
FARADAY_API faraday_status faraday_filter_state(const faraday_filter* filter, double* out, size_t capacity,
                                                size_t* dim);
FARADAY_API void faraday_filter_free(faraday_filter* filter);

/* Coefficient table of a generator (U0, U, Uprime, Weyl, WeylAdjoint,
 * Vprime, V, Ubar) at time t in the given channel basis (xy, circular,
 * xi_eta), with its unitarity defect, as JSON. */
FARADAY_API faraday_status faraday_check_unitarity_json(const faraday_config* config, const char* generator,
                                                        const char* basis, double t, char** out);

#ifdef __cplusplus
}
#endif

#endif /* FARADAY_FARADAY_H_ */
