// Copyright 2026 The rcacsim Authors
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

#include "rcacsim/rcacsim.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <string>

#include <json.hpp>

#include "rcacsim/environment.hpp"
#include "rcacsim/errors.hpp"
#include "rcacsim/rcac.hpp"
#include "rcacsim/scenario.hpp"

using nlohmann::json;

struct rcacsim_config {
  rcacsim::ScenarioConfig cfg;
};

struct rcacsim_result {
  rcacsim::RunResult run;
  rcacsim::GainsDocument gains;
};

namespace {

thread_local std::string g_last_error;

rcacsim_status fail(rcacsim_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

rcacsim_status from_exception() {
  try {
    throw;
  } catch (const rcacsim::DivergenceError& e) {
    return fail(RCACSIM_ERROR_DIVERGENCE, e.what());
  } catch (const rcacsim::SingularityError& e) {
    return fail(RCACSIM_ERROR_DIVERGENCE, e.what());
  } catch (const rcacsim::IoError& e) {
    return fail(RCACSIM_ERROR_IO, e.what());
  } catch (const rcacsim::ValidationError& e) {
    return fail(RCACSIM_ERROR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(RCACSIM_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(RCACSIM_ERROR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json stats_json(const rcacsim::RunStats& stats) {
  json j;
  j["steps"] = stats.steps;
  j["max_ortho_error"] = stats.max_ortho_error;
  j["max_p_asymmetry"] = stats.max_p_asymmetry;
  if (std::isfinite(stats.min_p_eigenvalue)) {
    j["min_p_eigenvalue"] = stats.min_p_eigenvalue;
  }
  j["thrust_saturation_steps"] = stats.thrust_saturation_steps;
  j["torque_saturation_steps"] = stats.torque_saturation_steps;
  j["tilt_saturation_steps"] = stats.tilt_saturation_steps;
  return j;
}

}  // namespace

extern "C" {

const char* rcacsim_version(void) { return RCACSIM_VERSION_STRING; }

const char* rcacsim_status_name(rcacsim_status status) {
  switch (status) {
    case RCACSIM_OK:
      return "ok";
    case RCACSIM_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case RCACSIM_ERROR_VALIDATION:
      return "validation error";
    case RCACSIM_ERROR_IO:
      return "io error";
    case RCACSIM_ERROR_DIVERGENCE:
      return "divergence";
    case RCACSIM_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* rcacsim_last_error(void) { return g_last_error.c_str(); }

void rcacsim_string_free(char* s) { delete[] s; }

rcacsim_status rcacsim_config_create(rcacsim_config** out) {
  if (out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "out is null");
  }
  *out = new rcacsim_config{};
  return RCACSIM_OK;
}

rcacsim_status rcacsim_config_load(const char* path, rcacsim_config** out) {
  if (path == nullptr || out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  try {
    auto* handle = new rcacsim_config{rcacsim::ScenarioConfig::load(path)};
    *out = handle;
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_config_parse(const char* json_text,
                                    rcacsim_config** out) {
  if (json_text == nullptr || out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  try {
    auto* handle = new rcacsim_config{rcacsim::ScenarioConfig::parse(json_text)};
    *out = handle;
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_config_set(rcacsim_config* cfg, const char* dotted_key,
                                  const char* json_value) {
  if (cfg == nullptr || dotted_key == nullptr || json_value == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    json value;
    try {
      value = json::parse(json_value);
    } catch (const json::exception&) {
      value = std::string(json_value);  // bare word: treat as a string
    }
    std::string pointer = "/";
    for (const char* p = dotted_key; *p != '\0'; ++p) {
      pointer += (*p == '.') ? '/' : *p;
    }
    json doc = cfg->cfg.to_json();
    doc[json::json_pointer(pointer)] = value;
    cfg->cfg = rcacsim::ScenarioConfig::from_json(doc, /*validate_now=*/false);
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_config_dump(const rcacsim_config* cfg,
                                   char** json_out) {
  if (cfg == nullptr || json_out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    *json_out = copy_string(cfg->cfg.to_json().dump(2) + "\n");
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_config_load_gains(rcacsim_config* cfg,
                                         const char* gains_path) {
  if (cfg == nullptr || gains_path == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    const rcacsim::GainsDocument doc = rcacsim::GainsDocument::load(gains_path);
    cfg->cfg.initial_gains = doc.gains;
    cfg->cfg.has_gains = true;
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

void rcacsim_config_free(rcacsim_config* cfg) { delete cfg; }

rcacsim_status rcacsim_run(const rcacsim_config* cfg, rcacsim_result** out) {
  if (cfg == nullptr || out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  try {
    rcacsim::Environment env(cfg->cfg);
    auto* result = new rcacsim_result{};
    result->run = env.run();
    result->gains.gains = result->run.final_gains;
    result->gains.tag =
        cfg->cfg.mode == rcacsim::RunMode::kLearn ? "learned" : "frozen";
    result->gains.scenario_hash = cfg->cfg.hash_hex();
    *out = result;
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

int rcacsim_result_diverged(const rcacsim_result* result) {
  return result != nullptr && result->run.diverged ? 1 : 0;
}

const char* rcacsim_result_error(const rcacsim_result* result) {
  return result == nullptr ? "" : result->run.error.c_str();
}

rcacsim_status rcacsim_result_telemetry_csv(const rcacsim_result* result,
                                            char** csv_out) {
  if (result == nullptr || csv_out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    *csv_out = copy_string(result->run.telemetry.to_csv());
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_result_write_telemetry(const rcacsim_result* result,
                                              const char* path) {
  if (result == nullptr || path == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    result->run.telemetry.write_csv(path);
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_result_gains_json(const rcacsim_result* result,
                                         char** json_out) {
  if (result == nullptr || json_out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    *json_out = copy_string(result->gains.to_json().dump(2) + "\n");
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_result_write_gains(const rcacsim_result* result,
                                          const char* path) {
  if (result == nullptr || path == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    result->gains.save(path);
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

rcacsim_status rcacsim_result_summary_json(const rcacsim_result* result,
                                           char** json_out) {
  if (result == nullptr || json_out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    const rcacsim::RunResult& run = result->run;
    json j;
    j["diverged"] = run.diverged;
    j["error"] = run.error;
    if (run.diverged) j["divergence_time"] = run.divergence_time;
    j["telemetry_rows"] = run.telemetry.size();
    j["stats"] = stats_json(run.stats);
    if (!run.telemetry.empty()) {
      const auto& last = run.telemetry.rows.back();
      j["final_time"] = last[0];
      j["final_position"] = {last[1], last[2], last[3]};
    }
    j["gains"] = result->gains.to_json();
    *json_out = copy_string(j.dump(2) + "\n");
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

void rcacsim_result_free(rcacsim_result* result) { delete result; }

rcacsim_status rcacsim_oracle_check(uint64_t seed,
                                    double* max_rel_error_out) {
  if (max_rel_error_out == nullptr) {
    return fail(RCACSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  try {
    rcacsim::RcacOracleOptions options;
    options.seed = seed;
    const rcacsim::RcacOracleReport report = rcacsim::rcac_oracle_check(
        {rcacsim::default_outer_xy_rcac(), rcacsim::default_outer_z_rcac(),
         rcacsim::default_inner_rcac()},
        options);
    *max_rel_error_out = report.max_rel_error;
    return RCACSIM_OK;
  } catch (...) {
    return from_exception();
  }
}

}  // extern "C"
