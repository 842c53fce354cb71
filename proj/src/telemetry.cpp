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

#include "rcacsim/telemetry.hpp"

#include <charconv>
#include <fstream>

#include "rcacsim/errors.hpp"

namespace rcacsim {

const std::array<const char*, kTelemetryColumns> kTelemetryHeader = {
    "t",
    "r1", "r2", "r3",
    "phi", "theta", "psi",
    "f",
    "tau1", "tau2", "tau3",
    "z1", "z2", "z3", "z4", "z5", "z6",
    "outer_r1_kp1", "outer_r1_kp2", "outer_r1_ki",
    "outer_r2_kp1", "outer_r2_kp2", "outer_r2_ki",
    "outer_r3_kp1", "outer_r3_kp2", "outer_r3_ki",
    "inner_roll_kp1", "inner_roll_kp2", "inner_roll_ki",
    "inner_pitch_kp1", "inner_pitch_kp2", "inner_pitch_ki",
    "inner_yaw_kp1", "inner_yaw_kp2", "inner_yaw_ki",
};

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw ValidationError("telemetry: format failure");
  return std::string(buf, ptr);
}

int Telemetry::column_index(std::string_view name) {
  for (int i = 0; i < kTelemetryColumns; ++i) {
    if (name == kTelemetryHeader[i]) return i;
  }
  return -1;
}

std::vector<double> Telemetry::column(std::string_view name) const {
  const int idx = column_index(name);
  if (idx < 0) {
    throw ValidationError("telemetry: unknown column " + std::string(name));
  }
  std::vector<double> out;
  out.reserve(rows.size());
  for (const Row& row : rows) out.push_back(row[idx]);
  return out;
}

std::string Telemetry::to_csv() const {
  std::string out;
  out.reserve(64 + rows.size() * 24 * kTelemetryColumns);
  for (int i = 0; i < kTelemetryColumns; ++i) {
    if (i > 0) out += ',';
    out += kTelemetryHeader[i];
  }
  out += '\n';
  for (const Row& row : rows) {
    for (int i = 0; i < kTelemetryColumns; ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void Telemetry::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::string text = to_csv();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path);
}

Telemetry::Row make_telemetry_row(double t, const Eigen::Vector3d& position,
                                  const EulerAngles& angles, double thrust,
                                  const Eigen::Vector3d& torque,
                                  const Eigen::Matrix<double, 6, 1>& z,
                                  const GainSet& gains) {
  Telemetry::Row row;
  int k = 0;
  row[k++] = t;
  for (int i = 0; i < 3; ++i) row[k++] = position(i);
  row[k++] = angles.roll;
  row[k++] = angles.pitch;
  row[k++] = angles.yaw;
  row[k++] = thrust;
  for (int i = 0; i < 3; ++i) row[k++] = torque(i);
  for (int i = 0; i < 6; ++i) row[k++] = z(i);
  for (int axis = 0; axis < 6; ++axis) {
    row[k++] = gains[axis].kp1;
    row[k++] = gains[axis].kp2;
    row[k++] = gains[axis].ki;
  }
  return row;
}

}  // namespace rcacsim
