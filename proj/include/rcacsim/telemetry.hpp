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

#ifndef RCACSIM_TELEMETRY_HPP_
#define RCACSIM_TELEMETRY_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rcacsim/autopilot.hpp"
#include "rcacsim/rigid_body.hpp"

namespace rcacsim {

/// Column order: t, position (r1..r3), Euler angles (phi, theta, psi),
/// thrust f, torque (tau1..tau3), per-axis errors (z1..z6: outer x/y/z then
/// inner roll/pitch/yaw), then the 18 gains in axis-major order.
inline constexpr int kTelemetryColumns = 35;

extern const std::array<const char*, kTelemetryColumns> kTelemetryHeader;

/// In-memory time series matching the CSV layout one-to-one. Doubles are
/// written with the shortest representation that round-trips, so output is
/// byte-stable across runs.
struct Telemetry {
  using Row = std::array<double, kTelemetryColumns>;
  std::vector<Row> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  /// Index of a named column, or -1 when unknown.
  static int column_index(std::string_view name);

  /// One named column as a vector (throws ValidationError on a bad name).
  std::vector<double> column(std::string_view name) const;

  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

/// Shortest decimal form of v that parses back to exactly v.
std::string format_double(double v);

Telemetry::Row make_telemetry_row(double t, const Eigen::Vector3d& position,
                                  const EulerAngles& angles, double thrust,
                                  const Eigen::Vector3d& torque,
                                  const Eigen::Matrix<double, 6, 1>& z,
                                  const GainSet& gains);

}  // namespace rcacsim

#endif  // RCACSIM_TELEMETRY_HPP_
