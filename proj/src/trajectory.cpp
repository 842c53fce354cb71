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

#include "rcacsim/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "rcacsim/errors.hpp"

namespace rcacsim {

Eigen::Vector3d waypoint_reference(double /*t*/, const Eigen::Vector3d& target) {
  return target;
}

Eigen::Vector3d helix_reference(double t, double omega) {
  return Eigen::Vector3d(std::cos(omega * t), std::sin(omega * t), omega * t);
}

Eigen::Vector3d Trajectory::position_ref(double t) const {
  switch (type) {
    case TrajectoryType::kWaypoint:
      return waypoint_reference(t, waypoint);
    case TrajectoryType::kHelix:
      return helix_reference(t, helix_omega);
    case TrajectoryType::kCustom: {
      if (t <= samples.front().first) return samples.front().second;
      if (t >= samples.back().first) return samples.back().second;
      auto it = std::upper_bound(
          samples.begin(), samples.end(), t,
          [](double value, const auto& s) { return value < s.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double span = hi.first - lo.first;
      const double a = (t - lo.first) / span;
      return (1.0 - a) * lo.second + a * hi.second;
    }
  }
  throw ValidationError("trajectory: unknown type");
}

void Trajectory::validate() const {
  if (!waypoint.allFinite()) {
    throw ValidationError("trajectory: waypoint must be finite");
  }
  if (!std::isfinite(helix_omega)) {
    throw ValidationError("trajectory: helix omega must be finite");
  }
  if (type == TrajectoryType::kCustom) {
    if (samples.size() < 2) {
      throw ValidationError("trajectory: custom table needs at least 2 samples");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!std::isfinite(samples[i].first) || !samples[i].second.allFinite()) {
        throw ValidationError("trajectory: custom sample must be finite");
      }
      if (i > 0 && samples[i].first <= samples[i - 1].first) {
        throw ValidationError(
            "trajectory: custom sample times must be strictly increasing");
      }
    }
  }
}

}  // namespace rcacsim
