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

// Exercises the shared library strictly through its C interface, the way an
// external embedder would: opaque handles, status codes, string ownership.

#include "rcacsim/rcacsim.h"

#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rcacsim_capi_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter;
};
int TempDir::counter = 0;

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  rcacsim_string_free(s);
  return out;
}

/// RAII wrapper so failing CHECKs cannot leak handles.
struct Config {
  rcacsim_config* ptr = nullptr;
  ~Config() { rcacsim_config_free(ptr); }
};

struct Result {
  rcacsim_result* ptr = nullptr;
  ~Result() { rcacsim_result_free(ptr); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(rcacsim_version() != nullptr);
  CHECK(std::strlen(rcacsim_version()) > 0);
  CHECK(std::string(rcacsim_status_name(RCACSIM_OK)) == "ok");
  CHECK(std::string(rcacsim_status_name(RCACSIM_ERROR_VALIDATION)) ==
        "validation error");
  // Every status has a distinct, non-empty name.
  CHECK(std::string(rcacsim_status_name(RCACSIM_ERROR_IO)) !=
        rcacsim_status_name(RCACSIM_ERROR_DIVERGENCE));
}

TEST_CASE("null arguments are rejected, not dereferenced") {
  CHECK(rcacsim_config_create(nullptr) == RCACSIM_ERROR_INVALID_ARGUMENT);
  CHECK(rcacsim_config_load(nullptr, nullptr) ==
        RCACSIM_ERROR_INVALID_ARGUMENT);
  CHECK(rcacsim_run(nullptr, nullptr) == RCACSIM_ERROR_INVALID_ARGUMENT);
  CHECK(rcacsim_oracle_check(1, nullptr) == RCACSIM_ERROR_INVALID_ARGUMENT);
  CHECK(std::strlen(rcacsim_last_error()) > 0);
}

TEST_CASE("config create, set, dump") {
  Config cfg;
  REQUIRE(rcacsim_config_create(&cfg.ptr) == RCACSIM_OK);

  CHECK(rcacsim_config_set(cfg.ptr, "duration", "7.5") == RCACSIM_OK);
  CHECK(rcacsim_config_set(cfg.ptr, "trajectory.type", "\"helix\"") ==
        RCACSIM_OK);
  CHECK(rcacsim_config_set(cfg.ptr, "trajectory.omega", "0.2") == RCACSIM_OK);
  // Bare words are accepted as strings.
  CHECK(rcacsim_config_set(cfg.ptr, "environment", "target") == RCACSIM_OK);

  char* text = nullptr;
  REQUIRE(rcacsim_config_dump(cfg.ptr, &text) == RCACSIM_OK);
  const nlohmann::json j = nlohmann::json::parse(take(text));
  CHECK(j["duration"] == 7.5);
  CHECK(j["trajectory"]["type"] == "helix");
  CHECK(j["trajectory"]["omega"] == 0.2);
  CHECK(j["environment"] == "target");

  // Unknown keys surface on the next full parse inside set.
  CHECK(rcacsim_config_set(cfg.ptr, "no_such_field", "1") ==
        RCACSIM_ERROR_VALIDATION);
  CHECK(std::string(rcacsim_last_error()).find("no_such_field") !=
        std::string::npos);
}

TEST_CASE("parse rejects malformed documents with context") {
  Config cfg;
  CHECK(rcacsim_config_parse("{\"dt\": 0}", &cfg.ptr) ==
        RCACSIM_ERROR_VALIDATION);
  CHECK(std::string(rcacsim_last_error()).find("dt") != std::string::npos);
  CHECK(cfg.ptr == nullptr);
  CHECK(rcacsim_config_parse("not json", &cfg.ptr) ==
        RCACSIM_ERROR_VALIDATION);
}

TEST_CASE("learn run produces telemetry, gains and a summary") {
  TempDir tmp;
  Config cfg;
  REQUIRE(rcacsim_config_create(&cfg.ptr) == RCACSIM_OK);
  REQUIRE(rcacsim_config_set(cfg.ptr, "duration", "0.5") == RCACSIM_OK);
  REQUIRE(rcacsim_config_set(cfg.ptr, "gravity_feedforward", "true") ==
          RCACSIM_OK);

  Result res;
  REQUIRE(rcacsim_run(cfg.ptr, &res.ptr) == RCACSIM_OK);
  CHECK(rcacsim_result_diverged(res.ptr) == 0);
  CHECK(std::string(rcacsim_result_error(res.ptr)).empty());

  char* text = nullptr;
  REQUIRE(rcacsim_result_telemetry_csv(res.ptr, &text) == RCACSIM_OK);
  const std::string csv = take(text);
  CHECK(csv.rfind("t,r1,r2,r3,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 52);  // header + 51 rows

  REQUIRE(rcacsim_result_summary_json(res.ptr, &text) == RCACSIM_OK);
  const nlohmann::json summary = nlohmann::json::parse(take(text));
  CHECK(summary["diverged"] == false);
  CHECK(summary["telemetry_rows"] == 51);
  CHECK(summary["final_time"] == 0.5);
  CHECK(summary["final_position"].size() == 3);
  CHECK(summary["stats"]["steps"] == 500);
  CHECK(summary["gains"]["format"] == "rcacsim-gains-v1");

  const std::string telem_path = (tmp.path / "telemetry.csv").string();
  const std::string gains_path = (tmp.path / "gains.json").string();
  REQUIRE(rcacsim_result_write_telemetry(res.ptr, telem_path.c_str()) ==
          RCACSIM_OK);
  REQUIRE(rcacsim_result_write_gains(res.ptr, gains_path.c_str()) ==
          RCACSIM_OK);
  CHECK(fs::file_size(telem_path) > 0);

  // The written gains feed straight back into a fly run.
  Config fly;
  REQUIRE(rcacsim_config_create(&fly.ptr) == RCACSIM_OK);
  REQUIRE(rcacsim_config_set(fly.ptr, "mode", "\"fly\"") == RCACSIM_OK);
  REQUIRE(rcacsim_config_set(fly.ptr, "duration", "0.2") == RCACSIM_OK);
  REQUIRE(rcacsim_config_load_gains(fly.ptr, gains_path.c_str()) ==
          RCACSIM_OK);
  Result flown;
  REQUIRE(rcacsim_run(fly.ptr, &flown.ptr) == RCACSIM_OK);
  CHECK(rcacsim_result_diverged(flown.ptr) == 0);
}

TEST_CASE("fly without gains fails at run, not at load") {
  Config cfg;
  REQUIRE(rcacsim_config_create(&cfg.ptr) == RCACSIM_OK);
  REQUIRE(rcacsim_config_set(cfg.ptr, "mode", "\"fly\"") == RCACSIM_OK);
  Result res;
  CHECK(rcacsim_run(cfg.ptr, &res.ptr) == RCACSIM_ERROR_VALIDATION);
  CHECK(res.ptr == nullptr);
  CHECK(std::string(rcacsim_last_error()).find("gains") != std::string::npos);
}

TEST_CASE("config files round trip through load") {
  TempDir tmp;
  const fs::path path = tmp.path / "cfg.json";
  std::ofstream(path) << R"({"duration": 3.25, "seed": 11})";

  Config cfg;
  REQUIRE(rcacsim_config_load(path.string().c_str(), &cfg.ptr) == RCACSIM_OK);
  char* text = nullptr;
  REQUIRE(rcacsim_config_dump(cfg.ptr, &text) == RCACSIM_OK);
  const nlohmann::json j = nlohmann::json::parse(take(text));
  CHECK(j["duration"] == 3.25);
  CHECK(j["seed"] == 11);

  Config missing;
  CHECK(rcacsim_config_load((tmp.path / "nope.json").string().c_str(),
                            &missing.ptr) == RCACSIM_ERROR_IO);
}

TEST_CASE("divergence is reported in the result, not as a failure") {
  Config cfg;
  REQUIRE(rcacsim_config_create(&cfg.ptr) == RCACSIM_OK);
  REQUIRE(rcacsim_config_set(cfg.ptr, "mode", "\"fly\"") == RCACSIM_OK);
  REQUIRE(rcacsim_config_set(cfg.ptr, "duration", "30") == RCACSIM_OK);
  // A strongly wrong-signed outer x gain slams the tilt command against the
  // cone, and positive pitch feedback then drives the attitude through the
  // vertical: a deterministic crash within the first second.
  REQUIRE(rcacsim_config_set(
              cfg.ptr, "initial_gains",
              R"({"outer": {"r1": {"kp1": -80.0, "kp2": -40.0, "ki": 0.0},
                            "r2": {"kp1": 0.0, "kp2": 0.0, "ki": 0.0},
                            "r3": {"kp1": 0.0, "kp2": 0.0, "ki": 0.0}},
                  "inner": {"roll": {"kp1": 0.0, "kp2": 0.0, "ki": 0.0},
                            "pitch": {"kp1": -2.0, "kp2": 0.0, "ki": 0.0},
                            "yaw": {"kp1": 0.0, "kp2": 0.0, "ki": 0.0}}})") ==
          RCACSIM_OK);

  Result res;
  REQUIRE(rcacsim_run(cfg.ptr, &res.ptr) == RCACSIM_OK);
  CHECK(rcacsim_result_diverged(res.ptr) != 0);
  CHECK(std::strlen(rcacsim_result_error(res.ptr)) > 0);

  char* text = nullptr;
  REQUIRE(rcacsim_result_summary_json(res.ptr, &text) == RCACSIM_OK);
  const nlohmann::json summary = nlohmann::json::parse(take(text));
  CHECK(summary["diverged"] == true);
  CHECK(summary.contains("divergence_time"));
}

TEST_CASE("adaptation self check stays under tolerance") {
  double max_rel_error = 1.0;
  REQUIRE(rcacsim_oracle_check(90210, &max_rel_error) == RCACSIM_OK);
  CHECK(max_rel_error < 1e-4);
  CHECK(max_rel_error > 0.0);
}
