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

#ifndef RCACSIM_INTEGRATOR_HPP_
#define RCACSIM_INTEGRATOR_HPP_

#include <Eigen/Dense>

namespace rcacsim {

/// Scratch space for the classic fixed-step fourth-order Runge-Kutta scheme,
/// sized once so the per-step work is allocation free.
class Rk4Workspace {
 public:
  explicit Rk4Workspace(Eigen::Index n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  /// Advances `x` in place from t to t + dt. `f(t, x, xdot)` must fill xdot.
  template <typename Derivative>
  void step(Derivative&& f, double t, double dt, Eigen::VectorXd& x) {
    f(t, x, k1_);
    tmp_ = x + (0.5 * dt) * k1_;
    f(t + 0.5 * dt, tmp_, k2_);
    tmp_ = x + (0.5 * dt) * k2_;
    f(t + 0.5 * dt, tmp_, k3_);
    tmp_ = x + dt * k3_;
    f(t + dt, tmp_, k4_);
    x += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  Eigen::VectorXd k1_, k2_, k3_, k4_, tmp_;
};

/// One-shot RK4 step for callers that do not keep a workspace around.
template <typename Derivative>
Eigen::VectorXd rk4_step(Derivative&& f, double t, double dt,
                         const Eigen::VectorXd& x) {
  Rk4Workspace ws(x.size());
  Eigen::VectorXd out = x;
  ws.step(f, t, dt, out);
  return out;
}

}  // namespace rcacsim

#endif  // RCACSIM_INTEGRATOR_HPP_
