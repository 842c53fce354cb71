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

#include "rcacsim/rigid_body.hpp"

#include <cmath>
#include <string>

#include "rcacsim/errors.hpp"
#include "rcacsim/math_utils.hpp"

namespace rcacsim {
namespace {

constexpr double kHalfPi = 1.5707963267948966;

void require_finite(const char* context, const char* field, double value) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(context) + ": non-finite " + field);
  }
}

void require_finite(const char* context, const char* field,
                    const Eigen::Ref<const Eigen::MatrixXd>& value) {
  if (!value.allFinite()) {
    throw ValidationError(std::string(context) + ": non-finite " + field);
  }
}

}  // namespace

void VehicleParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ValidationError("vehicle: mass must be positive and finite");
  }
  if (!(gravity > 0.0) || !std::isfinite(gravity)) {
    throw ValidationError("vehicle: gravity must be positive and finite");
  }
  if (!inertia.allFinite() ||
      (inertia - inertia.transpose()).norm() > 1e-9 * inertia.norm()) {
    throw ValidationError("vehicle: inertia must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ValidationError("vehicle: inertia must be positive definite");
  }
}

RigidBodyDerivative dynamics_derivative(const RigidBodyState& state,
                                        const WrenchCommand& wrench,
                                        const VehicleParams& params) {
  require_finite("dynamics_derivative", "position", state.position);
  require_finite("dynamics_derivative", "velocity", state.velocity);
  require_finite("dynamics_derivative", "attitude", state.attitude);
  require_finite("dynamics_derivative", "body_rates", state.body_rates);
  require_finite("dynamics_derivative", "thrust", wrench.thrust);
  require_finite("dynamics_derivative", "torque", wrench.torque);

  RigidBodyDerivative d;
  d.position_dot = state.velocity;
  d.velocity_dot = params.gravity * Eigen::Vector3d::UnitZ() +
                   state.attitude.col(2) * (wrench.thrust / params.mass);
  d.attitude_dot = state.attitude * skew(state.body_rates);
  d.body_rates_dot = params.inertia.ldlt().solve(
      wrench.torque -
      state.body_rates.cross(params.inertia * state.body_rates));
  return d;
}

Eigen::Matrix3d rotation_from_euler(const EulerAngles& angles) {
  const double cr = std::cos(angles.roll), sr = std::sin(angles.roll);
  const double cp = std::cos(angles.pitch), sp = std::sin(angles.pitch);
  const double cy = std::cos(angles.yaw), sy = std::sin(angles.yaw);

  Eigen::Matrix3d r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp, cp * sr, cp * cr;
  return r;
}

EulerAngles euler_from_rotation(const Eigen::Matrix3d& rotation) {
  const double sin_pitch = -rotation(2, 0);
  if (std::abs(sin_pitch) >= std::sin(kHalfPi - kGimbalMargin)) {
    throw SingularityError(
        "euler_from_rotation: pitch within gimbal-lock margin of +-pi/2");
  }
  EulerAngles angles;
  angles.pitch = std::asin(sin_pitch);
  angles.roll = std::atan2(rotation(2, 1), rotation(2, 2));
  angles.yaw = std::atan2(rotation(1, 0), rotation(0, 0));
  return angles;
}

Eigen::Matrix3d euler_rate_matrix(const EulerAngles& angles) {
  if (std::abs(angles.pitch) >= kHalfPi - kGimbalMargin) {
    throw SingularityError(
        "euler_rate_matrix: pitch within gimbal-lock margin of +-pi/2");
  }
  const double cr = std::cos(angles.roll), sr = std::sin(angles.roll);
  const double cp = std::cos(angles.pitch);
  const double tp = std::tan(angles.pitch);

  Eigen::Matrix3d s;
  s << 1.0, sr * tp, cr * tp,
       0.0, cr, -sr,
       0.0, sr / cp, cr / cp;
  return s;
}

Eigen::Vector3d euler_rates(const EulerAngles& angles,
                            const Eigen::Vector3d& body_rates) {
  return euler_rate_matrix(angles) * body_rates;
}

}  // namespace rcacsim
