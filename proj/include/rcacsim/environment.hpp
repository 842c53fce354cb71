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

#ifndef RCACSIM_ENVIRONMENT_HPP_
#define RCACSIM_ENVIRONMENT_HPP_

#include <array>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rcacsim/autopilot.hpp"
#include "rcacsim/integrator.hpp"
#include "rcacsim/noise.hpp"
#include "rcacsim/rcac.hpp"
#include "rcacsim/rigid_body.hpp"
#include "rcacsim/scenario.hpp"
#include "rcacsim/telemetry.hpp"

namespace rcacsim {

/// Offsets into the flat closed-loop state vector. Blocks, in order:
/// rigid body (18: position, velocity, rotation column-major, body rates),
/// six rate-error integrals, six optimizer blocks (learn mode only) and the
/// four actuator-lag states (target with actuator_tau > 0 only).
struct StateLayout {
  int rigid_offset = 0;
  int ev_offset = 18;
  std::array<int, 6> rcac_offset{{-1, -1, -1, -1, -1, -1}};
  std::array<int, 6> rcac_size{{0, 0, 0, 0, 0, 0}};
  int actuator_offset = -1;
  int size = 24;
};

/// Controller evaluation at one instant: post-saturation wrench command,
/// the six performance errors the adaptation sees (outer x/y/z in meters,
/// inner roll/pitch/yaw in radians), current gains, and saturation flags.
struct ControlOutputs {
  double thrust = 0.0;
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
  Eigen::Matrix<double, 6, 1> z = Eigen::Matrix<double, 6, 1>::Zero();
  EulerAngles angles;  // true vehicle attitude (not the measurement)
  GainSet gains{};
  bool thrust_saturated = false;
  bool torque_saturated = false;
  bool tilt_saturated = false;
};

struct RunStats {
  long steps = 0;
  double max_ortho_error = 0.0;      // worst pre-correction rotation defect
  double max_p_asymmetry = 0.0;      // worst covariance symmetry defect
  double min_p_eigenvalue = 0.0;     // smallest covariance eigenvalue seen
  long thrust_saturation_steps = 0;
  long torque_saturation_steps = 0;
  long tilt_saturation_steps = 0;
};

struct RunResult {
  Telemetry telemetry;
  GainSet final_gains{};
  RunStats stats;
  bool diverged = false;
  double divergence_time = 0.0;
  std::string error;  // empty on success

  bool ok() const { return !diverged; }
};

/// The closed-loop plant + cascaded controller (+ per-axis adaptation in
/// learn mode) as one coupled ODE advanced by fixed-step RK4.
///
/// In the source environment the controller reads the instantaneous plant
/// state. The target environment adds, per its configuration: measurement
/// noise/delay/zero-order hold (the controller then reads a frozen sample
/// during integration stages), first-order actuator lag, and plant mass and
/// inertia mismatch. With every perturbation at its neutral value the target
/// follows the source code path exactly, so trajectories match bit-for-bit.
class Environment {
 public:
  explicit Environment(const ScenarioConfig& config);

  const ScenarioConfig& config() const { return cfg_; }
  const StateLayout& layout() const { return layout_; }
  bool learning() const { return learning_; }

  double time() const { return t_; }
  const Eigen::VectorXd& state() const { return x_; }
  RigidBodyState rigid_state() const;

  /// Replaces the clock and the full state; measurement machinery is
  /// re-primed from the new state and run statistics restart.
  void set_state(double t, const Eigen::VectorXd& x);

  /// Current gains: the optimizer's theta* = P b in learn mode, the frozen
  /// configured gains otherwise.
  GainSet gains() const;

  /// Controller evaluation at the current state and clock.
  ControlOutputs outputs() const;

  /// Time derivative of the full state vector, exposed for tests.
  void derivative(double t, const Eigen::VectorXd& x,
                  Eigen::VectorXd& dx) const;

  /// One RK4 step of config dt. Throws DivergenceError when the state goes
  /// non-finite or the optimizer covariance degrades; SingularityError when
  /// the attitude reaches gimbal lock.
  void step();

  /// Full scenario: round(duration / dt) steps with telemetry decimated to
  /// log_rate. Divergence is reported in the result together with the
  /// telemetry collected up to the failure, not thrown.
  RunResult run();

 private:
  using Measurement = Eigen::Matrix<double, 12, 1>;  // r, v, Euler, omega

  struct ControlEval {
    OuterLoopResult outer;
    AttitudeExtractionResult att;
    InnerLoopResult inner;
    double thrust_cmd = 0.0;
    Eigen::Vector3d torque_cmd = Eigen::Vector3d::Zero();
    // Inertial force the wrench command actually requests, i.e. the desired
    // force after tilt and thrust limiting. The outer-loop learners regress
    // on this, not on the raw control-law output, so that the adaptation
    // drive stays consistent with what the plant receives.
    Eigen::Vector3d applied_force = Eigen::Vector3d::Zero();
    GainSet gains{};
    bool thrust_saturated = false;
    bool torque_saturated = false;
  };

  Measurement true_measurement(const Eigen::VectorXd& x) const;
  GainSet gains_at(const Eigen::VectorXd& x) const;
  ControlEval evaluate_controls(double t, const Eigen::VectorXd& x) const;
  Eigen::Vector3d position_ref(double t) const;
  void prime_measurements();
  void push_sample();
  void update_sensors();
  void refresh_setpoint_hold();
  void check_finite() const;
  void check_health();

  ScenarioConfig cfg_;
  VehicleParams plant_params_;  // includes target mass/inertia mismatch
  StateLayout layout_;
  std::vector<RcacAxis> axes_;  // six in learn mode, empty otherwise
  bool learning_ = false;
  bool hold_measurement_ = false;
  bool actuator_lag_ = false;
  double sample_period_ = 0.0;  // 0 = resample every step

  double t_origin_ = 0.0;
  long k_ = 0;
  double t_ = 0.0;
  Eigen::VectorXd x_;
  Rk4Workspace rk4_;

  GaussianNoise noise_;
  std::deque<std::pair<double, Measurement>> buffer_;
  Measurement held_ = Measurement::Zero();
  double next_sample_time_ = 0.0;
  AttitudeSetpoint setpoint_hold_;

  RunStats stats_;
  long health_stride_ = 100;
};

}  // namespace rcacsim

#endif  // RCACSIM_ENVIRONMENT_HPP_
