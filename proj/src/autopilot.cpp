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

#include "rcacsim/autopilot.hpp"

#include <cmath>

namespace rcacsim {

PPiResult p_pi_axis(double ref, double y, double y_dot, const AxisGains& gains,
                    double ev_integral) {
  PPiResult out;
  const double e = ref - y;
  out.ev = gains.kp1 * e - y_dot;
  out.phi << e, out.ev, ev_integral;
  out.u = gains.kp1 * e + gains.kp2 * out.ev + gains.ki * ev_integral;
  return out;
}

OuterLoopResult outer_loop(const Eigen::Vector3d& position_ref,
                           const Eigen::Vector3d& position,
                           const Eigen::Vector3d& velocity,
                           const std::array<AxisGains, 3>& gains,
                           const Eigen::Vector3d& ev_integrals) {
  OuterLoopResult out;
  for (int i = 0; i < 3; ++i) {
    out.axes[static_cast<size_t>(i)] =
        p_pi_axis(position_ref(i), position(i), velocity(i),
                  gains[static_cast<size_t>(i)], ev_integrals(i));
    out.force(i) = out.axes[static_cast<size_t>(i)].u;
    out.z(i) = position(i) - position_ref(i);
  }
  return out;
}

AttitudeExtractionResult attitude_extraction(
    const Eigen::Vector3d& desired_force, double yaw_ref,
    const AttitudeSetpoint& previous,
    const AttitudeExtractionOptions& options) {
  AttitudeExtractionResult out;

  const double magnitude = desired_force.norm();
  if (magnitude < options.degenerate_force_eps) {
    out.setpoint.angles = previous.angles;
    out.setpoint.thrust = 0.0;
    return out;
  }

  // n is the desired body e3 axis resolved in the inertial frame. Thrust is
  // negative along body e3, so n = F / f with f = -|F|.
  double thrust = -magnitude;
  Eigen::Vector3d n = desired_force / thrust;

  // A request tilted past the limit (n approaching or below the horizon,
  // n3 <= cos(limit)) is pulled back to the limit cone at the same yaw.
  const double cos_limit = std::cos(options.tilt_limit);
  if (n(2) < cos_limit) {
    out.tilt_saturated = true;
    const double horizontal = n.head<2>().norm();
    if (horizontal < 1e-12) {
      // Force along +e3 exactly: no meaningful tilt direction, stay level.
      n = Eigen::Vector3d::UnitZ();
    } else {
      n.head<2>() *= std::sin(options.tilt_limit) / horizontal;
      n(2) = cos_limit;
    }
    // Once the direction is clamped, carrying the full magnitude would
    // realize a force with the wrong vertical sign: a demand to push down
    // would come out as a push up of half its size, destabilizing the very
    // loop that issued it. The realizable magnitude is the least-squares
    // fit of the demand along the clamped axis, cut off at zero because
    // thrust cannot reverse - a downward demand releases thrust and lets
    // gravity act.
    thrust = std::min(0.0, n.dot(desired_force));
  }

  const double sy = std::sin(yaw_ref);
  const double cy = std::cos(yaw_ref);
  out.setpoint.angles.roll = std::asin(sy * n(0) - cy * n(1));
  out.setpoint.angles.pitch = std::atan2(cy * n(0) + sy * n(1), n(2));
  out.setpoint.angles.yaw = yaw_ref;
  out.setpoint.thrust = thrust;
  return out;
}

InnerLoopResult inner_loop(const EulerAngles& angles_ref,
                           const EulerAngles& angles,
                           const Eigen::Vector3d& euler_rates,
                           const std::array<AxisGains, 3>& gains,
                           const Eigen::Vector3d& ev_integrals) {
  InnerLoopResult out;
  const Eigen::Vector3d ref = angles_ref.vec();
  const Eigen::Vector3d y = angles.vec();
  for (int i = 0; i < 3; ++i) {
    out.axes[static_cast<size_t>(i)] =
        p_pi_axis(ref(i), y(i), euler_rates(i), gains[static_cast<size_t>(i)],
                  ev_integrals(i));
    out.torque(i) = out.axes[static_cast<size_t>(i)].u;
    out.z(i) = y(i) - ref(i);
  }
  return out;
}

}  // namespace rcacsim
