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

#ifndef RCACSIM_MATH_UTILS_HPP_
#define RCACSIM_MATH_UTILS_HPP_

#include <Eigen/Dense>
#include <cmath>

namespace rcacsim {

/// Cross-product (skew-symmetric) matrix: skew(a) * b == a x b.
inline Eigen::Matrix3d skew(const Eigen::Vector3d& a) {
  Eigen::Matrix3d m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
      -a.y(), a.x(), 0.0;
  return m;
}

/// Rotation matrix exp(skew(phi)) via Rodrigues' formula.
inline Eigen::Matrix3d so3_exp(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    return Eigen::Matrix3d::Identity() + skew(phi);
  }
  const Eigen::Matrix3d k = skew(phi / angle);
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
         (1.0 - std::cos(angle)) * k * k;
}

/// Frobenius norm of O^T O - I, the orthonormality defect.
inline double orthonormality_error(const Eigen::Matrix3d& o) {
  return (o.transpose() * o - Eigen::Matrix3d::Identity()).norm();
}

/// Projects a near-orthonormal matrix back onto SO(3) with Newton-Schulz
/// iterations. Converges quadratically; two or three passes take the
/// per-step integrator drift down to machine precision.
inline void orthonormalize(Eigen::Matrix3d& o) {
  for (int i = 0; i < 4; ++i) {
    const Eigen::Matrix3d gram = o.transpose() * o;
    if ((gram - Eigen::Matrix3d::Identity()).norm() < 1e-14) {
      break;
    }
    o = 0.5 * o * (3.0 * Eigen::Matrix3d::Identity() - gram);
  }
}

}  // namespace rcacsim

#endif  // RCACSIM_MATH_UTILS_HPP_
