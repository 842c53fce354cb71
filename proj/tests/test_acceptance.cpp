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

// End-to-end acceptance checks for the simulator. Each criterion prints
// exactly one [PASS]/[FAIL] line, preceded by indented measurement detail;
// the exit code is the number of failed criteria. Every tolerance is a named
// constant below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rcacsim/autopilot.hpp"
#include "rcacsim/environment.hpp"
#include "rcacsim/integrator.hpp"
#include "rcacsim/math_utils.hpp"
#include "rcacsim/noise.hpp"
#include "rcacsim/rcac.hpp"
#include "rcacsim/rigid_body.hpp"
#include "rcacsim/scenario.hpp"
#include "rcacsim/trajectory.hpp"

using namespace rcacsim;

namespace {

// --- Pinned tolerances ------------------------------------------------------

// 1: waypoint learning over 100 s.
constexpr double kFinalErrorTol = 0.1;        // |r_i - 1| per axis at t = 100
constexpr double kPositionBound = 10.0;       // "bounded": max |r| over the run
constexpr double kWallTimeBudget = 10.0;      // s

// 2: learned-gain plausibility against the published waypoint gain set.
constexpr double kGainRatioWindow = 5.0;      // each kp1, kp2 within [x/5, 5x]

// 3: helix learning improvement.
constexpr double kHelixRmsBound = 0.3;        // last-20 s RMS, trajectory units

// 4: transfer to the perturbed plant.
constexpr double kTransferErrTol = 0.2;       // per-axis error over last 20 s
constexpr int kTransferSeeds = 10;
constexpr double kTransferDuration = 60.0;    // s

// 5: minimizer oracle equivalence.
constexpr double kOracleTol = 1e-4;

// 6: invariants.
constexpr double kSymmetryTol = 1e-9;
constexpr double kOrthoTol = 1e-10;           // post-renormalization
constexpr double kMomentumTol = 1e-6;         // relative, torque-free 10 s
constexpr double kRetroTol = 1e-8;            // |zhat - z| with frozen gains
constexpr double kReconstructTol = 1e-9;      // attitude extraction round trip
constexpr double kRk4RatioLo = 8.0;           // 16 +- 50%
constexpr double kRk4RatioHi = 24.0;
constexpr double kScalarTol = 1e-6;

int failures = 0;

void verdict(bool pass, int criterion, const char* title) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              title);
  if (!pass) ++failures;
}

/// The bundled learning scenario: stock physics and adaptation settings plus
/// the two shipped autopilot choices (gravity feedforward on, rate-error
/// integral clamp 1.25). Matches data/configs/waypoint.json.
ScenarioConfig learning_config() {
  ScenarioConfig cfg;
  cfg.mode = RunMode::kLearn;
  cfg.duration = 100.0;
  cfg.gravity_feedforward = true;
  cfg.limits.ev_integral_max = 1.25;
  return cfg;
}

GainSet stock_waypoint_gains() {
  GainSet g{};
  g[kOuterX] = AxisGains{0.2168, 0.4697, 0.0004};
  g[kOuterY] = AxisGains{0.2212, 0.4877, 0.004};
  g[kOuterZ] = AxisGains{0.6114, 0.4296, 0.1753};
  g[kInnerRoll] = AxisGains{0.0597, 0.0249, 0.0471};
  g[kInnerPitch] = AxisGains{0.0607, 0.0259, 0.0464};
  g[kInnerYaw] = AxisGains{0.6490, 0.2902, 1.025e-9};
  return g;
}

const char* axis_name(int i) {
  static const char* names[6] = {"outer r1",   "outer r2",    "outer r3",
                                 "inner roll", "inner pitch", "inner yaw"};
  return names[i];
}

// --- Criteria 1 and 2 share one 100 s learning run --------------------------

struct LearnOutcome {
  RunResult result;
  double wall_seconds = 0.0;
};

LearnOutcome run_waypoint_learning() {
  LearnOutcome out;
  Environment env(learning_config());
  const auto start = std::chrono::steady_clock::now();
  out.result = env.run();
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

bool criterion1(const LearnOutcome& learn) {
  std::printf("criterion 1: waypoint learning reproduction\n");
  const RunResult& res = learn.result;
  if (!res.ok()) {
    std::printf("    run diverged at t = %.3f: %s\n", res.divergence_time,
                res.error.c_str());
    return false;
  }

  double max_pos = 0.0;
  for (const auto& row : res.telemetry.rows) {
    max_pos = std::max(
        max_pos, Eigen::Vector3d(row[1], row[2], row[3]).cwiseAbs().maxCoeff());
  }
  const auto& last = res.telemetry.rows.back();
  const Eigen::Vector3d final_err(last[1] - 1.0, last[2] - 1.0,
                                  last[3] - 1.0);
  std::printf("    final position error: (%.4f, %.4f, %.4f)  (tol %.1f per axis)\n",
              final_err(0), final_err(1), final_err(2), kFinalErrorTol);
  std::printf("    max |position component|: %.3f  (bound %.0f)\n", max_pos,
              kPositionBound);
  std::printf("    wall time: %.2f s  (budget %.0f s)\n", learn.wall_seconds,
              kWallTimeBudget);

  return final_err.cwiseAbs().maxCoeff() < kFinalErrorTol &&
         max_pos < kPositionBound && learn.wall_seconds < kWallTimeBudget;
}

bool criterion2(const LearnOutcome& learn) {
  std::printf("criterion 2: learned-gain plausibility\n");
  if (!learn.result.ok()) {
    std::printf("    no learned gains: the learning run diverged\n");
    return false;
  }
  const GainSet learned = learn.result.final_gains;
  const GainSet reference = stock_waypoint_gains();

  bool pass = true;
  for (int i = 0; i < 6; ++i) {
    const auto& got = learned[static_cast<size_t>(i)];
    const auto& want = reference[static_cast<size_t>(i)];
    for (int c = 0; c < 2; ++c) {
      const double value = c == 0 ? got.kp1 : got.kp2;
      const double ref = c == 0 ? want.kp1 : want.kp2;
      const double ratio = value / ref;
      const bool sign_ok = value > 0.0;
      const bool ratio_ok =
          ratio > 1.0 / kGainRatioWindow && ratio < kGainRatioWindow;
      std::printf("    %-11s kp%d: learned %9.4f  reference %7.4f  ratio %7.3f  %s\n",
                  axis_name(i), c + 1, value, ref, ratio,
                  sign_ok && ratio_ok ? "ok"
                  : sign_ok           ? "outside 5x window"
                                      : "wrong sign");
      pass = pass && sign_ok && ratio_ok;
    }
  }
  return pass;
}

// --- Criterion 3 -------------------------------------------------------------

bool criterion3(RunStats* stats_out) {
  std::printf("criterion 3: helix learning improvement\n");
  ScenarioConfig cfg = learning_config();
  cfg.trajectory.type = TrajectoryType::kHelix;
  cfg.trajectory.helix_omega = 0.1;
  const RunResult res = Environment(cfg).run();
  *stats_out = res.stats;
  if (!res.ok()) {
    std::printf("    run diverged at t = %.3f: %s\n", res.divergence_time,
                res.error.c_str());
    return false;
  }

  double first_sq = 0.0, last_sq = 0.0;
  long first_n = 0, last_n = 0;
  for (const auto& row : res.telemetry.rows) {
    const double t = row[0];
    const Eigen::Vector3d err =
        Eigen::Vector3d(row[1], row[2], row[3]) - helix_reference(t, 0.1);
    if (t <= 20.0) {
      first_sq += err.squaredNorm();
      ++first_n;
    }
    if (t >= 80.0) {
      last_sq += err.squaredNorm();
      ++last_n;
    }
  }
  const double first_rms = std::sqrt(first_sq / static_cast<double>(first_n));
  const double last_rms = std::sqrt(last_sq / static_cast<double>(last_n));
  std::printf("    RMS position error: first 20 s %.4f, last 20 s %.4f  "
              "(bound %.1f)\n",
              first_rms, last_rms, kHelixRmsBound);
  return last_rms < first_rms && last_rms < kHelixRmsBound;
}

// --- Criterion 4 -------------------------------------------------------------

bool criterion4(const LearnOutcome& learn) {
  std::printf("criterion 4: transfer stability on the perturbed plant\n");
  if (!learn.result.ok()) {
    std::printf("    no learned gains: the learning run diverged\n");
    return false;
  }

  ScenarioConfig cfg = learning_config();
  cfg.mode = RunMode::kFly;
  cfg.environment = EnvironmentKind::kTarget;  // stock noise/delay/lag/hold
  cfg.duration = kTransferDuration;
  cfg.initial_gains = learn.result.final_gains;
  cfg.has_gains = true;

  bool pass = true;
  for (int s = 0; s < kTransferSeeds; ++s) {
    cfg.seed = 101 + static_cast<std::uint64_t>(s);
    const RunResult res = Environment(cfg).run();
    if (!res.ok()) {
      std::printf("    seed %llu: diverged at t = %.3f: %s\n",
                  static_cast<unsigned long long>(cfg.seed),
                  res.divergence_time, res.error.c_str());
      pass = false;
      continue;
    }
    double worst = 0.0;
    for (const auto& row : res.telemetry.rows) {
      if (row[0] < kTransferDuration - 20.0) continue;
      const Eigen::Vector3d err(row[1] - 1.0, row[2] - 1.0, row[3] - 1.0);
      worst = std::max(worst, err.cwiseAbs().maxCoeff());
    }
    std::printf("    seed %llu: worst per-axis error over last 20 s: %.4f  "
                "(tol %.1f)\n",
                static_cast<unsigned long long>(cfg.seed), worst,
                kTransferErrTol);
    pass = pass && worst < kTransferErrTol;
  }
  return pass;
}

// --- Criterion 5 -------------------------------------------------------------

bool criterion5() {
  std::printf("criterion 5: minimizer oracle equivalence\n");
  const std::vector<RcacHyperparams> rows{
      default_outer_xy_rcac(), default_outer_z_rcac(), default_inner_rcac()};
  RcacOracleOptions opts;  // 20 trajectories x 10 s, dt 1e-3, 10 samples
  const RcacOracleReport report = rcac_oracle_check(rows, opts);
  for (size_t r = 0; r < report.per_row_max.size(); ++r) {
    std::printf("    filter row %zu: max relative gain error %.3e\n", r,
                report.per_row_max[r]);
  }
  std::printf("    %d comparisons, worst %.3e at row %d trajectory %d "
              "t = %.2f  (tol %.0e)\n",
              report.comparisons, report.max_rel_error, report.worst_row,
              report.worst_trajectory, report.worst_time, kOracleTol);
  return report.comparisons == 3 * 20 * 10 && report.max_rel_error < kOracleTol;
}

// --- Criterion 6: invariants -------------------------------------------------

bool invariant_covariance(const LearnOutcome& learn, const RunStats& helix) {
  const RunStats& wp = learn.result.stats;
  const double asym = std::max(wp.max_p_asymmetry, helix.max_p_asymmetry);
  const double min_eig = std::min(wp.min_p_eigenvalue, helix.min_p_eigenvalue);
  std::printf("    covariance: worst asymmetry %.2e (tol %.0e), smallest "
              "eigenvalue %.3e (> 0)\n",
              asym, kSymmetryTol, min_eig);
  return asym < kSymmetryTol && min_eig > 0.0;
}

bool invariant_orthonormality() {
  ScenarioConfig cfg = learning_config();
  cfg.duration = 10.0;
  Environment env(cfg);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    env.step();
    worst = std::max(worst, orthonormality_error(env.rigid_state().attitude));
  }
  std::printf("    rotation orthonormality after renormalization: %.2e "
              "(tol %.0e)\n",
              worst, kOrthoTol);
  return worst < kOrthoTol;
}

bool invariant_momentum() {
  ScenarioConfig cfg;
  cfg.mode = RunMode::kFly;
  cfg.has_gains = true;  // all-zero gains: no wrench at all
  Environment env(cfg);
  Eigen::VectorXd x = env.state();
  x.segment<3>(15) = Eigen::Vector3d(0.3, 0.0, 2.0);
  env.set_state(0.0, x);

  const Eigen::Matrix3d J = cfg.vehicle.inertia;
  const auto momentum = [&]() {
    const RigidBodyState s = env.rigid_state();
    return Eigen::Vector3d(s.attitude * (J * s.body_rates));
  };
  const Eigen::Vector3d L0 = momentum();
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    env.step();
    if ((k + 1) % 50 == 0) {
      worst = std::max(worst, (momentum() - L0).norm() / L0.norm());
    }
  }
  std::printf("    angular momentum drift over 10 s torque-free: %.2e "
              "relative (tol %.0e)\n",
              worst, kMomentumTol);
  return worst < kMomentumTol;
}

bool invariant_retrospective() {
  // With frozen gains the applied control is u = phi * theta, so the
  // retrospective performance zhat = z + phi_f theta - u_f must collapse to
  // z itself once both filters run from rest.
  double worst = 0.0;
  for (const RcacHyperparams& hyper :
       {default_outer_xy_rcac(), default_outer_z_rcac(),
        default_inner_rcac()}) {
    const RcacAxis axis(hyper, 3);
    Eigen::VectorXd theta(3);
    theta << 0.45, -0.15, 0.08;
    Eigen::VectorXd x(axis.state_size());
    axis.initial_state(x);
    Rk4Workspace ws(axis.state_size());
    const double dt = 1e-3;
    const auto phi_at = [](double t) {
      Eigen::RowVectorXd phi(3);
      phi << std::sin(1.3 * t), std::cos(0.6 * t), std::sin(2.1 * t + 0.4);
      return phi;
    };
    auto f = [&](double t, const Eigen::VectorXd& v, Eigen::VectorXd& dv) {
      const Eigen::RowVectorXd phi = phi_at(t);
      axis.derivative(v, phi, (phi * theta)(0), 0.2 * std::sin(t), dv);
    };
    for (long k = 0; k < 6000; ++k) {
      ws.step(f, k * dt, dt, x);
      if (k * dt < 1.0) continue;
      worst = std::max(worst,
                       std::abs((axis.filtered_regressor(x) * theta)(0) -
                                axis.filtered_control(x)));
    }
  }
  std::printf("    retrospective consistency |zhat - z| with frozen gains: "
              "%.2e (tol %.0e)\n",
              worst, kRetroTol);
  return worst < kRetroTol;
}

bool invariant_reconstruction() {
  CounterRng rng(20260814);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    // Random demand inside the 60 degree cone, pointing upward (negative
    // vertical), magnitudes spanning ~0.5 N to ~30 N.
    const double tilt = rng.next_uniform(0.0, 1.0);  // rad, < limit
    const double azimuth = rng.next_uniform(0.0, 6.283185307179586);
    const double mag = rng.next_uniform(0.5, 30.0);
    const Eigen::Vector3d f_d(mag * std::sin(tilt) * std::cos(azimuth),
                              mag * std::sin(tilt) * std::sin(azimuth),
                              -mag * std::cos(tilt));
    const double yaw = rng.next_uniform(-3.14, 3.14);
    const AttitudeExtractionResult out =
        attitude_extraction(f_d, yaw, AttitudeSetpoint{});
    const Eigen::Vector3d realized =
        rotation_from_euler(out.setpoint.angles).col(2) * out.setpoint.thrust;
    worst = std::max(worst, (realized - f_d).norm());
  }
  std::printf("    attitude-extraction reconstruction over 200 demands: "
              "%.2e (tol %.0e)\n",
              worst, kReconstructTol);
  return worst < kReconstructTol;
}

bool invariant_rk4_order() {
  const auto final_state = [](double dt) {
    ScenarioConfig cfg = learning_config();
    cfg.mode = RunMode::kFly;
    cfg.initial_gains = stock_waypoint_gains();
    cfg.has_gains = true;
    cfg.dt = dt;
    Environment env(cfg);
    const long n = std::lround(0.512 / dt);
    for (long k = 0; k < n; ++k) env.step();
    return Eigen::VectorXd(env.state());
  };
  const Eigen::VectorXd coarse = final_state(4e-3);
  const Eigen::VectorXd mid = final_state(2e-3);
  const Eigen::VectorXd fine = final_state(1e-3);
  const double ratio = (coarse - mid).norm() / (mid - fine).norm();
  std::printf("    RK4 error ratio under dt halving: %.1f  (window [%.0f, %.0f])\n",
              ratio, kRk4RatioLo, kRk4RatioHi);
  return ratio > kRk4RatioLo && ratio < kRk4RatioHi;
}

bool invariant_scalar_flow() {
  // Constant phi_f = 1, z = 1, u_f = 0, rz = 1, p0 = 1: the information
  // flow has the closed form Pi(t) = 1 + t, b(t) = -t, so at t = 1 the
  // covariance is 1/2 and the minimizer is -1/2.
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;  // [Pi, b]
  Eigen::RowVectorXd phi_f = Eigen::RowVectorXd::Ones(1);
  Rk4Workspace ws(2);
  auto f = [&](double, const Eigen::VectorXd&, Eigen::VectorXd& dv) {
    Eigen::MatrixXd pi_dot(1, 1);
    Eigen::VectorXd b_dot(1);
    rcac_information_derivative(phi_f, 0.0, 1.0, 1.0, pi_dot, b_dot);
    dv(0) = pi_dot(0, 0);
    dv(1) = b_dot(0);
  };
  const double dt = 1e-3;
  for (int k = 0; k < 1000; ++k) ws.step(f, k * dt, dt, x);
  const double p_err = std::abs(1.0 / x(0) - 0.5);
  const double theta_err = std::abs(x(1) / x(0) - (-0.5));
  std::printf("    scalar closed form at t = 1: |P - 1/2| = %.2e, "
              "|theta + 1/2| = %.2e  (tol %.0e)\n",
              p_err, theta_err, kScalarTol);
  return p_err < kScalarTol && theta_err < kScalarTol;
}

bool criterion6(const LearnOutcome& learn, const RunStats& helix_stats) {
  std::printf("criterion 6: invariant suites\n");
  bool pass = true;
  pass = invariant_covariance(learn, helix_stats) && pass;
  pass = invariant_orthonormality() && pass;
  pass = invariant_momentum() && pass;
  pass = invariant_retrospective() && pass;
  pass = invariant_reconstruction() && pass;
  pass = invariant_rk4_order() && pass;
  pass = invariant_scalar_flow() && pass;
  return pass;
}

// --- Criterion 7 -------------------------------------------------------------

bool criterion7() {
  std::printf("criterion 7: determinism\n");

  ScenarioConfig learn = learning_config();
  learn.duration = 2.0;
  const std::string a = Environment(learn).run().telemetry.to_csv();
  const std::string b = Environment(learn).run().telemetry.to_csv();
  std::printf("    learn runs, %zu bytes each: %s\n", a.size(),
              a == b ? "identical" : "DIFFER");

  ScenarioConfig fly = learning_config();
  fly.mode = RunMode::kFly;
  fly.environment = EnvironmentKind::kTarget;
  fly.duration = 5.0;
  fly.seed = 7;
  fly.initial_gains = stock_waypoint_gains();
  fly.has_gains = true;
  const std::string c = Environment(fly).run().telemetry.to_csv();
  const std::string d = Environment(fly).run().telemetry.to_csv();
  std::printf("    noisy target runs, %zu bytes each: %s\n", c.size(),
              c == d ? "identical" : "DIFFER");

  return a == b && !a.empty() && c == d && !c.empty();
}

}  // namespace

int main() {
  const LearnOutcome learn = run_waypoint_learning();

  verdict(criterion1(learn), 1, "waypoint learning reproduction");
  verdict(criterion2(learn), 2, "learned-gain plausibility");

  // The helix run also feeds the covariance invariant in criterion 6.
  RunStats helix_stats;
  verdict(criterion3(&helix_stats), 3, "helix learning improvement");
  verdict(criterion4(learn), 4, "transfer stability");
  verdict(criterion5(), 5, "minimizer oracle equivalence");
  verdict(criterion6(learn, helix_stats), 6, "invariant suites");
  verdict(criterion7(), 7, "determinism");

  if (failures == 0) {
    std::printf("all 7 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criterion(s) failed\n", failures);
  }
  return failures;
}
