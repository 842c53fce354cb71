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

#ifndef RCACSIM_RIGID_BODY_HPP_
#define RCACSIM_RIGID_BODY_HPP_

#include <Eigen/Dense>

namespace rcacsim {

// Conventions used throughout:
//   - Inertial frame is NED: +e3 points down along gravity, g > 0.
//   - `attitude` resolves body-frame vectors into the inertial frame
//     (body-to-inertial), so attitude_dot = attitude * skew(body_rates).
//   - Thrust acts along the body e3 axis; it is negative at hover.

/// Inertial properties of the vehicle.
struct VehicleParams {
  double mass = 1.56;                                  // kg
  Eigen::Matrix3d inertia =
      Eigen::Vector3d(0.03, 0.03, 0.05).asDiagonal();  // kg m^2
  double gravity = 9.81;                               // m/s^2, along +e3

  /// Throws ValidationError unless mass > 0, gravity > 0 and the inertia
  /// matrix is symmetric positive definite.
  void validate() const;
};

/// Twelve-state rigid-body configuration.
struct RigidBodyState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();   // m, inertial
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   // m/s, inertial
  Eigen::Matrix3d attitude = Eigen::Matrix3d::Identity();  // body-to-inertial
  Eigen::Vector3d body_rates = Eigen::Vector3d::Zero();  // rad/s, body frame
};

struct RigidBodyDerivative {
  Eigen::Vector3d position_dot;
  Eigen::Vector3d velocity_dot;
  Eigen::Matrix3d attitude_dot;
  Eigen::Vector3d body_rates_dot;
};

/// Scalar thrust along body e3 plus a body torque.
struct WrenchCommand {
  double thrust = 0.0;                              // N
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();  // N m
};

/// 3-2-1 Euler angles: yaw about e3, then pitch about e2, then roll about e1.
struct EulerAngles {
  double roll = 0.0;   // phi, rad
  double pitch = 0.0;  // theta, rad
  double yaw = 0.0;    // psi, rad

  Eigen::Vector3d vec() const { return {roll, pitch, yaw}; }
};

/// Pitch values closer than this to +-pi/2 are treated as gimbal lock.
inline constexpr double kGimbalMargin = 1e-3;

/// Equations of motion:
///   position_dot   = v
///   m velocity_dot = m g e3 + attitude e3 f
///   attitude_dot   = attitude skew(omega)
///   J rates_dot    = tau - omega x J omega
/// Throws ValidationError on non-finite inputs, naming the offending field.
RigidBodyDerivative dynamics_derivative(const RigidBodyState& state,
                                        const WrenchCommand& wrench,
                                        const VehicleParams& params);

/// Body-to-inertial rotation for a 3-2-1 sequence: Rz(yaw) Ry(pitch) Rx(roll).
Eigen::Matrix3d rotation_from_euler(const EulerAngles& angles);

/// Inverse of rotation_from_euler. Throws SingularityError when the pitch
/// is within kGimbalMargin of +-pi/2.
EulerAngles euler_from_rotation(const Eigen::Matrix3d& rotation);

/// The 3-2-1 rate map S with euler_rates = S(angles) * body_rates:
///   [1  sin(phi) tan(theta)   cos(phi) tan(theta)]
///   [0  cos(phi)             -sin(phi)           ]
///   [0  sin(phi) / cos(theta) cos(phi) / cos(theta)]
/// Throws SingularityError near gimbal lock.
Eigen::Matrix3d euler_rate_matrix(const EulerAngles& angles);

/// S(angles) * body_rates, ordered (roll_dot, pitch_dot, yaw_dot).
Eigen::Vector3d euler_rates(const EulerAngles& angles,
                            const Eigen::Vector3d& body_rates);

}  // namespace rcacsim

#endif  // RCACSIM_RIGID_BODY_HPP_
