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

#include "rcacsim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcacsim/errors.hpp"
#include "rcacsim/math_utils.hpp"

namespace rcacsim {

Environment::Environment(const ScenarioConfig& config)
    : cfg_(config), rk4_(1), noise_(config.seed) {
  cfg_.validate();
  // Gains may be attached after a config file is loaded (e.g. from a separate
  // gains file), so their presence is a run precondition rather than part of
  // file validation.
  if (cfg_.mode == RunMode::kFly && !cfg_.has_gains) {
    throw ValidationError(
        "config: mode \"fly\" requires gains (initial_gains or gains_file)");
  }

  plant_params_ = cfg_.vehicle;
  const bool target = cfg_.environment == EnvironmentKind::kTarget;
  if (target) {
    plant_params_.mass *= cfg_.target.mass_scale;
    plant_params_.inertia *= cfg_.target.inertia_scale;
  }

  learning_ = cfg_.mode == RunMode::kLearn;
  hold_measurement_ =
      target && (cfg_.target.meas_noise_sigma.maxCoeff() > 0.0 ||
                 cfg_.target.meas_delay > 0.0 || cfg_.target.sensor_rate > 0.0);
  actuator_lag_ = target && cfg_.target.actuator_tau > 0.0;
  sample_period_ =
      cfg_.target.sensor_rate > 0.0 ? 1.0 / cfg_.target.sensor_rate : 0.0;

  int offset = layout_.ev_offset + 6;
  if (learning_) {
    axes_.reserve(6);
    axes_.emplace_back(cfg_.rcac_outer_xy, 3);
    axes_.emplace_back(cfg_.rcac_outer_xy, 3);
    axes_.emplace_back(cfg_.rcac_outer_z, 3);
    for (int i = 0; i < 3; ++i) axes_.emplace_back(cfg_.rcac_inner, 3);
    for (int i = 0; i < 6; ++i) {
      layout_.rcac_offset[i] = offset;
      layout_.rcac_size[i] = axes_[i].state_size();
      offset += layout_.rcac_size[i];
    }
  }
  if (actuator_lag_) {
    layout_.actuator_offset = offset;
    offset += 4;
  }
  layout_.size = offset;
  rk4_ = Rk4Workspace(layout_.size);

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(layout_.size);
  Eigen::Map<Eigen::Matrix3d>(x0.data() + 6) = Eigen::Matrix3d::Identity();
  if (learning_) {
    for (int i = 0; i < 6; ++i) {
      auto seg = x0.segment(layout_.rcac_offset[i], layout_.rcac_size[i]);
      if (cfg_.has_gains) {
        const Eigen::VectorXd theta0 = cfg_.initial_gains[i].vec();
        axes_[i].initial_state(seg, &theta0);
      } else {
        axes_[i].initial_state(seg);
      }
    }
  }
  set_state(0.0, x0);
}

RigidBodyState Environment::rigid_state() const {
  RigidBodyState s;
  s.position = x_.head<3>();
  s.velocity = x_.segment<3>(3);
  s.attitude = Eigen::Map<const Eigen::Matrix3d>(x_.data() + 6);
  s.body_rates = x_.segment<3>(15);
  return s;
}

void Environment::set_state(double t, const Eigen::VectorXd& x) {
  if (x.size() != layout_.size) {
    throw ValidationError("environment: state size mismatch");
  }
  t_origin_ = t;
  k_ = 0;
  t_ = t;
  x_ = x;
  stats_ = RunStats{};
  stats_.min_p_eigenvalue = std::numeric_limits<double>::infinity();
  setpoint_hold_ =
      AttitudeSetpoint{EulerAngles{0.0, 0.0, cfg_.yaw_reference}, 0.0};
  prime_measurements();
  refresh_setpoint_hold();
}

GainSet Environment::gains_at(const Eigen::VectorXd& x) const {
  if (!learning_) return cfg_.initial_gains;
  GainSet out;
  for (int i = 0; i < 6; ++i) {
    const Eigen::Vector3d theta =
        axes_[i].gains(x.segment(layout_.rcac_offset[i], layout_.rcac_size[i]));
    out[i] = AxisGains::from_vec(theta);
  }
  return out;
}

GainSet Environment::gains() const { return gains_at(x_); }

Environment::Measurement Environment::true_measurement(
    const Eigen::VectorXd& x) const {
  Measurement m;
  m.head<3>() = x.head<3>();
  m.segment<3>(3) = x.segment<3>(3);
  const EulerAngles angles =
      euler_from_rotation(Eigen::Map<const Eigen::Matrix3d>(x.data() + 6));
  m.segment<3>(6) = angles.vec();
  m.tail<3>() = x.segment<3>(15);
  return m;
}

Eigen::Vector3d Environment::position_ref(double t) const {
  Eigen::Vector3d r = cfg_.trajectory.position_ref(t);
  if (cfg_.z_up) r(2) = -r(2);
  return r;
}

Environment::ControlEval Environment::evaluate_controls(
    double t, const Eigen::VectorXd& x) const {
  ControlEval eval;
  eval.gains = gains_at(x);

  const Measurement meas = hold_measurement_ ? held_ : true_measurement(x);
  const Eigen::Vector3d r_m = meas.head<3>();
  const Eigen::Vector3d v_m = meas.segment<3>(3);
  const EulerAngles ang_m{meas(6), meas(7), meas(8)};
  const Eigen::Vector3d w_m = meas.tail<3>();

  const std::array<AxisGains, 3> outer_gains{eval.gains[kOuterX],
                                             eval.gains[kOuterY],
                                             eval.gains[kOuterZ]};
  const std::array<AxisGains, 3> inner_gains{eval.gains[kInnerRoll],
                                             eval.gains[kInnerPitch],
                                             eval.gains[kInnerYaw]};
  const Eigen::Vector3d outer_ints = x.segment<3>(layout_.ev_offset);
  const Eigen::Vector3d inner_ints = x.segment<3>(layout_.ev_offset + 3);

  eval.outer = outer_loop(position_ref(t), r_m, v_m, outer_gains, outer_ints);

  // The outer law commands effective forces for the translational model in
  // which gravity appears on the vertical axis. Without feedforward the
  // extraction realizes that command as-is and the vertical law must learn
  // the weight trim; with feedforward the weight is carried geometrically
  // and the vertical law faces a gravity-free axis.
  Eigen::Vector3d force_demand = eval.outer.force;
  const double weight = cfg_.vehicle.mass * cfg_.vehicle.gravity;
  if (cfg_.gravity_feedforward) force_demand(2) -= weight;

  AttitudeExtractionOptions options;
  options.tilt_limit = cfg_.limits.tilt_max_rad();
  eval.att = attitude_extraction(force_demand, cfg_.yaw_reference,
                                 setpoint_hold_, options);

  const double f_max =
      cfg_.limits.thrust_factor * cfg_.vehicle.mass * cfg_.vehicle.gravity;
  eval.thrust_cmd = std::clamp(eval.att.setpoint.thrust, -f_max, f_max);
  eval.thrust_saturated = eval.thrust_cmd != eval.att.setpoint.thrust;
  eval.applied_force =
      rotation_from_euler(eval.att.setpoint.angles).col(2) * eval.thrust_cmd;

  const Eigen::Vector3d rates_m = euler_rates(ang_m, w_m);
  eval.inner =
      inner_loop(eval.att.setpoint.angles, ang_m, rates_m, inner_gains,
                 inner_ints);
  for (int i = 0; i < 3; ++i) {
    eval.torque_cmd(i) = std::clamp(eval.inner.torque(i),
                                    -cfg_.limits.torque_max,
                                    cfg_.limits.torque_max);
  }
  eval.torque_saturated =
      (eval.torque_cmd.array() != eval.inner.torque.array()).any();
  return eval;
}

void Environment::derivative(double t, const Eigen::VectorXd& x,
                             Eigen::VectorXd& dx) const {
  dx.resize(layout_.size);
  const ControlEval eval = evaluate_controls(t, x);

  WrenchCommand wrench;
  if (actuator_lag_) {
    const int a = layout_.actuator_offset;
    wrench.thrust = x(a);
    wrench.torque = x.segment<3>(a + 1);
    const double inv_tau = 1.0 / cfg_.target.actuator_tau;
    dx(a) = (eval.thrust_cmd - x(a)) * inv_tau;
    dx.segment<3>(a + 1) = (eval.torque_cmd - x.segment<3>(a + 1)) * inv_tau;
  } else {
    wrench.thrust = eval.thrust_cmd;
    wrench.torque = eval.torque_cmd;
  }

  RigidBodyState s;
  s.position = x.head<3>();
  s.velocity = x.segment<3>(3);
  s.attitude = Eigen::Map<const Eigen::Matrix3d>(x.data() + 6);
  s.body_rates = x.segment<3>(15);
  const RigidBodyDerivative d = dynamics_derivative(s, wrench, plant_params_);
  dx.head<3>() = d.position_dot;
  dx.segment<3>(3) = d.velocity_dot;
  Eigen::Map<Eigen::Matrix3d>(dx.data() + 6) = d.attitude_dot;
  dx.segment<3>(15) = d.body_rates_dot;

  for (int i = 0; i < 3; ++i) {
    dx(layout_.ev_offset + i) = eval.outer.axes[i].ev;
    dx(layout_.ev_offset + 3 + i) = eval.inner.axes[i].ev;
  }

  if (learning_) {
    for (int i = 0; i < 6; ++i) {
      const PPiResult& axis_result =
          i < 3 ? eval.outer.axes[i] : eval.inner.axes[i - 3];
      const double z = i < 3 ? eval.outer.z(i) : eval.inner.z(i - 3);
      // Each learner sees the control actually commanded to the plant: the
      // limited force component for an outer axis, the limited torque for an
      // inner axis. Feeding the raw law output instead lets the filtered
      // control track unrealizable demands and destabilizes the adaptation.
      // Under gravity feedforward the weight the extraction carries is not
      // part of the vertical law's output, so it is added back to express
      // the applied control in the law's own coordinates.
      double u_applied = i < 3 ? eval.applied_force(i) : eval.torque_cmd(i - 3);
      if (i == 2 && cfg_.gravity_feedforward) {
        u_applied += cfg_.vehicle.mass * cfg_.vehicle.gravity;
      }
      axes_[i].derivative(
          x.segment(layout_.rcac_offset[i], layout_.rcac_size[i]),
          axis_result.phi, u_applied, z,
          dx.segment(layout_.rcac_offset[i], layout_.rcac_size[i]));
    }
  }
}

void Environment::prime_measurements() {
  buffer_.clear();
  if (!hold_measurement_) return;
  buffer_.emplace_back(t_, true_measurement(x_));
  next_sample_time_ = t_;
  update_sensors();
}

void Environment::push_sample() {
  buffer_.emplace_back(t_, true_measurement(x_));
  const double horizon = t_ - cfg_.target.meas_delay - 2.0 * cfg_.dt;
  while (buffer_.size() > 1 && buffer_[1].first <= horizon) {
    buffer_.pop_front();
  }
}

void Environment::update_sensors() {
  bool due = false;
  if (sample_period_ <= 0.0) {
    due = true;
  } else {
    while (t_ >= next_sample_time_ - 0.5 * cfg_.dt) {
      due = true;
      next_sample_time_ += sample_period_;
    }
  }
  if (!due) return;

  const double query = t_ - cfg_.target.meas_delay + 0.25 * cfg_.dt;
  const Measurement* sample = &buffer_.front().second;
  for (auto it = buffer_.rbegin(); it != buffer_.rend(); ++it) {
    if (it->first <= query) {
      sample = &it->second;
      break;
    }
  }
  held_ = *sample;
  const Eigen::Vector4d& sigma = cfg_.target.meas_noise_sigma;
  for (int i = 0; i < 3; ++i) held_(i) += noise_.sample(sigma(0));
  for (int i = 3; i < 6; ++i) held_(i) += noise_.sample(sigma(1));
  for (int i = 6; i < 9; ++i) held_(i) += noise_.sample(sigma(2));
  for (int i = 9; i < 12; ++i) held_(i) += noise_.sample(sigma(3));
}

void Environment::refresh_setpoint_hold() {
  const ControlEval eval = evaluate_controls(t_, x_);
  setpoint_hold_ = eval.att.setpoint;
}

void Environment::check_finite() const {
  if (x_.allFinite()) return;
  int i = 0;
  while (i < layout_.size && std::isfinite(x_(i))) ++i;
  const char* block = "state";
  if (i < 3) {
    block = "position";
  } else if (i < 6) {
    block = "velocity";
  } else if (i < 15) {
    block = "attitude";
  } else if (i < 18) {
    block = "body rates";
  } else if (i < 24) {
    block = "controller integrals";
  } else if (layout_.actuator_offset >= 0 && i >= layout_.actuator_offset) {
    block = "actuator lag";
  } else {
    block = "optimizer";
  }
  throw DivergenceError(std::string("non-finite ") + block, t_);
}

void Environment::check_health() {
  if (!learning_) return;
  for (int i = 0; i < 6; ++i) {
    const auto seg =
        x_.segment(layout_.rcac_offset[i], layout_.rcac_size[i]);
    stats_.max_p_asymmetry =
        std::max(stats_.max_p_asymmetry, axes_[i].symmetry_error(seg));
    stats_.min_p_eigenvalue = std::min(
        stats_.min_p_eigenvalue, axes_[i].min_covariance_eigenvalue(seg));
    axes_[i].check_health(seg, t_);
  }
}

void Environment::step() {
  const double dt = cfg_.dt;
  rk4_.step(
      [this](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        derivative(t, x, dx);
      },
      t_, dt, x_);
  ++k_;
  t_ = t_origin_ + static_cast<double>(k_) * dt;
  ++stats_.steps;

  Eigen::Map<Eigen::Matrix3d> o(x_.data() + 6);
  Eigen::Matrix3d rotation = o;
  stats_.max_ortho_error =
      std::max(stats_.max_ortho_error, orthonormality_error(rotation));
  orthonormalize(rotation);
  o = rotation;

  if (cfg_.limits.ev_integral_max > 0.0) {
    const double lim = cfg_.limits.ev_integral_max;
    for (int i = 0; i < 6; ++i) {
      double& s = x_(layout_.ev_offset + i);
      s = std::clamp(s, -lim, lim);
    }
  }

  check_finite();
  if (hold_measurement_) {
    push_sample();
    update_sensors();
  }

  const ControlEval eval = evaluate_controls(t_, x_);
  setpoint_hold_ = eval.att.setpoint;
  if (eval.thrust_saturated) ++stats_.thrust_saturation_steps;
  if (eval.torque_saturated) ++stats_.torque_saturation_steps;
  if (eval.att.tilt_saturated) ++stats_.tilt_saturation_steps;

  if (learning_ && (k_ % health_stride_ == 0)) check_health();
}

ControlOutputs Environment::outputs() const {
  const ControlEval eval = evaluate_controls(t_, x_);
  ControlOutputs out;
  out.thrust = eval.thrust_cmd;
  out.torque = eval.torque_cmd;
  out.z.head<3>() = eval.outer.z;
  out.z.tail<3>() = eval.inner.z;
  out.gains = eval.gains;
  out.angles =
      euler_from_rotation(Eigen::Map<const Eigen::Matrix3d>(x_.data() + 6));
  out.thrust_saturated = eval.thrust_saturated;
  out.torque_saturated = eval.torque_saturated;
  out.tilt_saturated = eval.att.tilt_saturated;
  return out;
}

RunResult Environment::run() {
  RunResult res;
  const double dt = cfg_.dt;
  const long n = std::llround(cfg_.duration / dt);
  long decim = 1;
  if (cfg_.log_rate > 0.0) {
    decim = std::max<long>(1, std::llround(1.0 / (cfg_.log_rate * dt)));
  }

  const auto log_row = [&]() {
    const ControlOutputs out = outputs();
    res.telemetry.rows.push_back(make_telemetry_row(
        t_, x_.head<3>(), out.angles, out.thrust, out.torque, out.z,
        out.gains));
  };

  try {
    for (long k = 0; k < n; ++k) {
      if (k % decim == 0) log_row();
      step();
    }
    if (n > 0) log_row();
    if (learning_) check_health();
  } catch (const DivergenceError& e) {
    res.diverged = true;
    res.divergence_time = e.time();
    res.error = e.what();
  } catch (const SingularityError& e) {
    const DivergenceError wrapped(e.what(), t_);
    res.diverged = true;
    res.divergence_time = t_;
    res.error = wrapped.what();
  } catch (const ValidationError& e) {
    res.diverged = true;
    res.divergence_time = t_;
    res.error = e.what();
  }
  res.final_gains = gains();
  res.stats = stats_;
  return res;
}

}  // namespace rcacsim
