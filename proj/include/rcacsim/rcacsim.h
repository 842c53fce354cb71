/* Copyright 2026 The rcacsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the rcacsim shared library.
 *
 * All functions that can fail return an rcacsim_status; RCACSIM_OK is zero.
 * On failure a human-readable message is available from rcacsim_last_error()
 * (thread-local, valid until the next failing call on the same thread).
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with rcacsim_string_free().
 */

#ifndef RCACSIM_RCACSIM_H_
#define RCACSIM_RCACSIM_H_

#include <stdint.h>

#if defined(_WIN32)
#define RCACSIM_API __declspec(dllexport)
#else
#define RCACSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rcacsim_status {
  RCACSIM_OK = 0,
  RCACSIM_ERROR_INVALID_ARGUMENT = 1,
  RCACSIM_ERROR_VALIDATION = 2,
  RCACSIM_ERROR_IO = 3,
  RCACSIM_ERROR_DIVERGENCE = 4,
  RCACSIM_ERROR_INTERNAL = 5,
} rcacsim_status;

/* Opaque handles. */
typedef struct rcacsim_config rcacsim_config;
typedef struct rcacsim_result rcacsim_result;

RCACSIM_API const char* rcacsim_version(void);
RCACSIM_API const char* rcacsim_status_name(rcacsim_status status);
RCACSIM_API const char* rcacsim_last_error(void);
RCACSIM_API void rcacsim_string_free(char* s);

/* --- Scenario configuration ------------------------------------------- */

/* A config with every field at its documented default (learn mode,
 * waypoint trajectory, source environment). */
RCACSIM_API rcacsim_status rcacsim_config_create(rcacsim_config** out);

/* Load and fully validate a JSON config file. */
RCACSIM_API rcacsim_status rcacsim_config_load(const char* path,
                                               rcacsim_config** out);

/* Parse and fully validate a JSON config from memory. */
RCACSIM_API rcacsim_status rcacsim_config_parse(const char* json_text,
                                                rcacsim_config** out);

/* Set one field by dotted path, e.g. ("target.meas_delay", "0.05") or
 * ("trajectory.type", "\"helix\""). The value is JSON; a bare word is
 * treated as a string for convenience. Schema errors are reported
 * immediately; cross-field validation happens at rcacsim_run(). */
RCACSIM_API rcacsim_status rcacsim_config_set(rcacsim_config* cfg,
                                              const char* dotted_key,
                                              const char* json_value);

/* Fully resolved config as pretty-printed JSON. */
RCACSIM_API rcacsim_status rcacsim_config_dump(const rcacsim_config* cfg,
                                               char** json_out);

/* Install gains from a gains JSON file (frozen gains for fly mode, or a
 * warm start for learn mode). */
RCACSIM_API rcacsim_status rcacsim_config_load_gains(rcacsim_config* cfg,
                                                     const char* gains_path);

RCACSIM_API void rcacsim_config_free(rcacsim_config* cfg);

/* --- Simulation -------------------------------------------------------- */

/* Validate the config and run the scenario. Returns RCACSIM_OK even when
 * the simulation diverges mid-run: the result then carries the partial
 * telemetry and rcacsim_result_diverged() is nonzero. Configuration errors
 * return a failing status and no result. */
RCACSIM_API rcacsim_status rcacsim_run(const rcacsim_config* cfg,
                                       rcacsim_result** out);

/* --- Results ----------------------------------------------------------- */

RCACSIM_API int rcacsim_result_diverged(const rcacsim_result* result);

/* Empty string when the run succeeded. Owned by the result. */
RCACSIM_API const char* rcacsim_result_error(const rcacsim_result* result);

RCACSIM_API rcacsim_status rcacsim_result_telemetry_csv(
    const rcacsim_result* result, char** csv_out);
RCACSIM_API rcacsim_status rcacsim_result_write_telemetry(
    const rcacsim_result* result, const char* path);

/* Final gains as a gains-document JSON (tag "learned" for learn runs). */
RCACSIM_API rcacsim_status rcacsim_result_gains_json(
    const rcacsim_result* result, char** json_out);
RCACSIM_API rcacsim_status rcacsim_result_write_gains(
    const rcacsim_result* result, const char* path);

/* Run outcome digest: divergence flag and message, step and row counts,
 * final time/position, integrator and optimizer health statistics, and the
 * final gains. */
RCACSIM_API rcacsim_status rcacsim_result_summary_json(
    const rcacsim_result* result, char** json_out);

RCACSIM_API void rcacsim_result_free(rcacsim_result* result);

/* --- Self checks ------------------------------------------------------- */

/* Cross-checks the adaptation ODEs against a direct regularized
 * least-squares solve over seeded random signals, covering all three
 * default per-loop settings. Writes the worst relative gain error. */
RCACSIM_API rcacsim_status rcacsim_oracle_check(uint64_t seed,
                                                double* max_rel_error_out);

#ifdef __cplusplus
}
#endif

#endif /* RCACSIM_RCACSIM_H_ */
