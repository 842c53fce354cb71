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

#ifndef RCACSIM_AUTOPILOT_HPP_
#define RCACSIM_AUTOPILOT_HPP_

#include <Eigen/Dense>
#include <array>

#include "rcacsim/rigid_body.hpp"

namespace rcacsim {

// Cascaded control architecture: three outer-loop axis controllers turn
// position errors into a desired inertial force vector; attitude extraction
// converts that vector into a thrust magnitude and desired Euler angles;
// three inner-loop axis controllers turn attitude errors into body torques.
// Every axis controller is the same modified P-PI law,
//   u = kp1 e + kp2 ev + ki int(ev),   e = r - y,   ev = kp1 e - ydot,
// which is linear in the gain vector: u = [e ev int(ev)] * (kp1, kp2, ki).

/// The per-axis gain triple of the modified P-PI law.
struct AxisGains {
  double kp1 = 0.0;
  double kp2 = 0.0;
  double ki = 0.0;

  Eigen::Vector3d vec() const { return {kp1, kp2, ki}; }
  static AxisGains from_vec(const Eigen::Vector3d& v) {
    return {v(0), v(1), v(2)};
  }
};

/// Axis order used everywhere a six-axis pack appears (gains files,
/// telemetry columns, optimizer banks).
enum AxisIndex {
  kOuterX = 0,
  kOuterY = 1,
  kOuterZ = 2,
  kInnerRoll = 3,
  kInnerPitch = 4,
  kInnerYaw = 5,
};

using GainSet = std::array<AxisGains, 6>;

/// One axis-controller evaluation: the control, the regressor row
/// [e, ev, int(ev)], and the synthesized rate error ev (whose integral the
/// caller owns as an ODE state).
struct PPiResult {
  double u = 0.0;
  Eigen::RowVector3d phi = Eigen::RowVector3d::Zero();
  double ev = 0.0;
};

PPiResult p_pi_axis(double ref, double y, double y_dot, const AxisGains& gains,
                    double ev_integral);

struct OuterLoopResult {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();  // desired inertial force
  std::array<PPiResult, 3> axes;
  Eigen::Vector3d z = Eigen::Vector3d::Zero();  // y - r per axis
};

/// Three decoupled position controllers; axis i sees y = position(i),
/// ydot = velocity(i). The law itself carries no gravity term; whether the
/// vehicle weight is fed forward into the force demand downstream is the
/// caller's choice.
OuterLoopResult outer_loop(const Eigen::Vector3d& position_ref,
                           const Eigen::Vector3d& position,
                           const Eigen::Vector3d& velocity,
                           const std::array<AxisGains, 3>& gains,
                           const Eigen::Vector3d& ev_integrals);

/// Desired attitude plus scalar thrust realizing a desired force vector.
struct AttitudeSetpoint {
  EulerAngles angles;
  double thrust = 0.0;  // N, negative-up in NED
};

struct AttitudeExtractionOptions {
  double degenerate_force_eps = 1e-6;  // N
  double tilt_limit = 1.0471975511965976;  // rad (60 deg)
};

struct AttitudeExtractionResult {
  AttitudeSetpoint setpoint;
  bool tilt_saturated = false;
};

/// Solves rotation_from_euler(angles) * e3 * thrust = desired_force with the
/// requested yaw. Thrust is -|desired_force|. Requests tilted beyond the
/// tilt limit (including force vectors pointing below the horizon) are
/// saturated to the limit and flagged. Near-zero force holds the previous
/// attitude with zero thrust.
AttitudeExtractionResult attitude_extraction(
    const Eigen::Vector3d& desired_force, double yaw_ref,
    const AttitudeSetpoint& previous,
    const AttitudeExtractionOptions& options = {});

struct InnerLoopResult {
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
  std::array<PPiResult, 3> axes;
  Eigen::Vector3d z = Eigen::Vector3d::Zero();
};

/// Three decoupled attitude controllers; axis i sees y = angles(i),
/// ydot = euler_rates(i).
InnerLoopResult inner_loop(const EulerAngles& angles_ref,
                           const EulerAngles& angles,
                           const Eigen::Vector3d& euler_rates,
                           const std::array<AxisGains, 3>& gains,
                           const Eigen::Vector3d& ev_integrals);

}  // namespace rcacsim

#endif  // RCACSIM_AUTOPILOT_HPP_
