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

#ifndef RCACSIM_TRAJECTORY_HPP_
#define RCACSIM_TRAJECTORY_HPP_

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace rcacsim {

enum class TrajectoryType { kWaypoint, kHelix, kCustom };

/// Position reference generator. The yaw reference is supplied separately
/// by the scenario (zero by default).
struct Trajectory {
  TrajectoryType type = TrajectoryType::kWaypoint;

  // Waypoint: constant target for all t; no velocity reference.
  Eigen::Vector3d waypoint = Eigen::Vector3d(1.0, 1.0, 1.0);

  // Helix: (cos(w t), sin(w t), w t).
  double helix_omega = 0.1;

  // Custom: piecewise-linear table of (time, position), clamped at the ends.
  std::vector<std::pair<double, Eigen::Vector3d>> samples;

  Eigen::Vector3d position_ref(double t) const;
  void validate() const;
};

/// Constant waypoint command, r_d(t) = target for all t >= 0.
Eigen::Vector3d waypoint_reference(double t, const Eigen::Vector3d& target);

/// Helical command, r_d(t) = (cos(w t), sin(w t), w t).
Eigen::Vector3d helix_reference(double t, double omega);

}  // namespace rcacsim

#endif  // RCACSIM_TRAJECTORY_HPP_
