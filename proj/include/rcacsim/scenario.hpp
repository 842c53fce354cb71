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

#ifndef RCACSIM_SCENARIO_HPP_
#define RCACSIM_SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rcacsim/autopilot.hpp"
#include "rcacsim/rcac.hpp"
#include "rcacsim/rigid_body.hpp"
#include "rcacsim/trajectory.hpp"

namespace rcacsim {

enum class RunMode { kLearn, kFly };
enum class EnvironmentKind { kSource, kTarget };

/// Default adaptation settings per loop: filter, output penalty, and the
/// initial covariance scale (the inverse of the gain-regularization weight).
RcacHyperparams default_outer_xy_rcac();  // 1/(s+0.5),        rz 1e4, p0 1e-3
RcacHyperparams default_outer_z_rcac();   // 1/((s+1.5)(s+3)), rz 1e4, p0 1e-5
RcacHyperparams default_inner_rcac();     // 1/(s+2),          rz 1e4, p0 1e-3

/// Imperfections applied only in the target environment. Zero noise, zero
/// delay, zero lag, sensor_rate = 0 (continuous measurements) and unit scales
/// make the target bit-identical to the source.
struct TargetPerturbations {
  /// Gaussian measurement noise std per channel group:
  /// position (m), velocity (m/s), attitude (rad), body rates (rad/s).
  Eigen::Vector4d meas_noise_sigma{0.005, 0.01, 0.002, 0.005};
  double meas_delay = 0.02;    // sensor latency (s)
  double sensor_rate = 250.0;  // zero-order-hold update rate (Hz); 0 disables
  double actuator_tau = 0.02;  // first-order lag on thrust and torque (s)
  double mass_scale = 1.0;     // plant mass mismatch (controller unaware)
  double inertia_scale = 1.0;  // plant inertia mismatch

  bool any_active() const;
  void validate() const;
};

/// Wrench saturation and attitude-command limits applied after the cascade.
struct CommandLimits {
  double thrust_factor = 4.0;   // |f| <= thrust_factor * m * g
  double torque_max = 1.0;      // |tau_i| <= torque_max (N m)
  double tilt_max_deg = 60.0;   // commanded tilt cone half-angle
  // Symmetric anti-windup bound on each velocity-error integral state;
  // 0 disables the clamp.
  double ev_integral_max = 0.0;

  double tilt_max_rad() const;
  void validate() const;
};

/// Fully resolved simulation scenario. All fields carry working defaults so a
/// config file only needs to override what differs.
struct ScenarioConfig {
  RunMode mode = RunMode::kLearn;
  double duration = 100.0;  // s
  double dt = 1e-3;         // fixed RK4 step (s)
  std::uint64_t seed = 1;
  double log_rate = 100.0;  // telemetry rate (Hz); 0 logs every step
  EnvironmentKind environment = EnvironmentKind::kSource;
  bool z_up = false;          // negate third command channel (ENU-style input)
  double yaw_reference = 0.0;  // rad, constant
  // Subtract the vehicle weight from the vertical force demand before
  // attitude extraction, so tilt is computed against the thrust actually
  // holding the vehicle up rather than against the small trim force alone.
  bool gravity_feedforward = false;

  Trajectory trajectory;
  VehicleParams vehicle;

  RcacHyperparams rcac_outer_xy = default_outer_xy_rcac();
  RcacHyperparams rcac_outer_z = default_outer_z_rcac();
  RcacHyperparams rcac_inner = default_inner_rcac();

  CommandLimits limits;
  TargetPerturbations target;

  GainSet initial_gains{};  // all zero by default
  bool has_gains = false;   // true once gains were supplied explicitly

  std::string output_dir = "out";

  void validate() const;

  /// Serializes every resolved field; initial_gains appear only when they
  /// were supplied explicitly, so the gains requirement of fly mode
  /// round-trips.
  nlohmann::json to_json() const;
  static ScenarioConfig from_json(const nlohmann::json& j,
                                  bool validate_now = true);

  /// Parse + validate a JSON config file; a "gains_file" entry is resolved
  /// relative to the config file's directory and loaded into initial_gains.
  static ScenarioConfig load(const std::string& path);
  static ScenarioConfig parse(const std::string& text);
  void save(const std::string& path) const;

  /// Canonical serialized form (sorted keys, no whitespace) and its FNV-1a
  /// 64-bit hash, used to stamp gains files with their provenance.
  std::string canonical_dump() const;
  std::string hash_hex() const;
};

/// Serializable set of the six axis gain triples plus provenance metadata.
struct GainsDocument {
  GainSet gains{};
  std::string tag = "learned";
  std::string scenario_hash;  // hex of ScenarioConfig::hash_hex(), may be ""

  nlohmann::json to_json() const;
  static GainsDocument from_json(const nlohmann::json& j);
  static GainsDocument load(const std::string& path);
  void save(const std::string& path) const;
};

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace rcacsim

#endif  // RCACSIM_SCENARIO_HPP_
