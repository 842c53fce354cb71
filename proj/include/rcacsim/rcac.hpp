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

#ifndef RCACSIM_RCAC_HPP_
#define RCACSIM_RCAC_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rcacsim/lti_filter.hpp"

namespace rcacsim {

// Continuous-time retrospective cost optimizer.
//
// The applied control is u = Phi * theta with regressor row Phi. Candidate
// gains are scored retrospectively through the filtered signals
// Phi_f = Gf[Phi], u_f = Gf[u]: zhat = z + Phi_f * theta_hat - u_f, and the
// cost  J(t, theta_hat) = int_0^t zhat^2 Rz dtau + theta_hat^T Rtheta
// theta_hat  is minimized exactly by the normal equations
//   Pi(t) theta*(t) = b(t),
//   Pidot = Phi_f^T Rz Phi_f,            Pi(0) = (1/p0) I  (= Rtheta),
//   bdot  = -Phi_f^T Rz (z - u_f),       b(0) = 0.
// Setting the cost gradient to zero gives these signs directly; the batch
// minimizer below provides an independent cross-check.
//
// The equivalent covariance form P = Pi^-1, theta* = P b, with
// Pdot = -P Phi_f^T Rz Phi_f P and P(0) = p0 I, traces the same trajectory
// but is hostile to fixed-step integration: its local decay rate scales with
// Rz ||Phi_f||^2 ||P||, which for cold starts (large P) sits far outside any
// explicit method's stability region. The optimizer therefore integrates the
// information form, whose right-hand side does not depend on Pi or b at all,
// and maps to gains by a small symmetric solve on demand.

/// Per-loop optimizer settings: the filter and the two scalar weights.
struct RcacHyperparams {
  TransferFunction gf;
  double rz = 1.0e4;   // performance weight R_z
  double p0 = 1.0e3;   // initial covariance scale, P(0) = p0 I

  void validate() const;
};

/// Exact-minimizer information flow given the filtered signals:
/// Pi_dot = Rz phi_f^T phi_f, b_dot = -Rz (z - u_f) phi_f^T. Pi is (l x l),
/// b is (l), phi_f is (1 x l). Symmetry of Pi_dot is built in (outer product
/// of phi_f with itself), so Pi stays symmetric under any Runge-Kutta
/// combination of derivatives, and every increment is positive semidefinite.
void rcac_information_derivative(
    const Eigen::Ref<const Eigen::RowVectorXd>& phi_f, double u_f, double z,
    double rz, Eigen::Ref<Eigen::MatrixXd> Pi_dot,
    Eigen::Ref<Eigen::VectorXd> b_dot);

/// Reference covariance-form flow of the same minimizer, P_dot =
/// -Rz (phi_f P)^T (phi_f P), b_dot as above. Used by tests to confirm the
/// two forms describe one trajectory (P_dot = -P Pi_dot P); the simulator
/// itself integrates the information form.
void rcac_pb_derivative(const Eigen::Ref<const Eigen::MatrixXd>& P,
                        const Eigen::Ref<const Eigen::RowVectorXd>& phi_f,
                        double u_f, double z, double rz,
                        Eigen::Ref<Eigen::MatrixXd> P_dot,
                        Eigen::Ref<Eigen::VectorXd> b_dot);

/// One axis's optimizer: Pi, b plus the regressor and control filter banks,
/// packed contiguously as [Pi | b | x_phi | x_u] inside a larger state
/// vector.
///
/// The packing lets the closed-loop simulator advance every optimizer with
/// the same integrator that advances the plant.
class RcacAxis {
 public:
  RcacAxis(const RcacHyperparams& hyper, int regressor_size);

  int regressor_size() const { return l_; }
  int filter_order() const { return nf_; }
  int state_size() const { return l_ * l_ + l_ + nf_ * l_ + nf_; }
  const RcacHyperparams& hyper() const { return hyper_; }
  const StateSpace& filter() const { return gf_; }

  /// Pi = (1/p0) I, b = theta0 / p0 (zero by default), filters at rest.
  /// A nonzero theta0 makes theta*(0) = theta0 and shifts the regularizer
  /// to penalize departure from theta0.
  void initial_state(Eigen::Ref<Eigen::VectorXd> x,
                     const Eigen::VectorXd* theta0 = nullptr) const;

  /// Fills x_dot given the current packed state and the raw sample
  /// (phi, u, z). Throws ValidationError on non-finite samples.
  void derivative(const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::RowVectorXd>& phi, double u,
                  double z, Eigen::Ref<Eigen::VectorXd> x_dot) const;

  /// Current optimal gains theta*, the solution of Pi theta* = b
  /// (equivalently P b with P = Pi^-1).
  Eigen::VectorXd gains(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Accumulated information matrix Pi.
  Eigen::MatrixXd information(const Eigen::Ref<const Eigen::VectorXd>& x)
      const;
  /// Covariance P = Pi^-1, symmetrized.
  Eigen::MatrixXd covariance(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd offset(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::RowVectorXd filtered_regressor(
      const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double filtered_control(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Frobenius asymmetry of the integrated Pi (structurally zero: every
  /// derivative is a bitwise-symmetric outer product).
  double symmetry_error(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Smallest eigenvalue of the covariance P = Pi^-1: 1/max-eig(Pi) while Pi
  /// is positive definite, a negative value once Pi picks up a negative
  /// eigenvalue.
  double min_covariance_eigenvalue(
      const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Throws DivergenceError when the covariance has lost symmetry or
  /// positive definiteness beyond tolerance (min eigenvalue <= 1e-12 p0),
  /// which indicates the integration step is too large.
  void check_health(const Eigen::Ref<const Eigen::VectorXd>& x,
                    double time) const;

 private:
  RcacHyperparams hyper_;
  StateSpace gf_;
  int l_;
  int nf_;
};

/// Direct regularized least-squares solve of the discretized retrospective
/// cost over a sampled history, with trapezoid quadrature weights. This is
/// the independent cross-check for the P/b flow; the simulator itself never
/// calls it.
Eigen::VectorXd rcac_batch_minimizer(
    const std::vector<double>& times,
    const std::vector<Eigen::RowVectorXd>& phi_f,
    const std::vector<double>& u_f, const std::vector<double>& z, double rz,
    double p0);

struct RcacOracleOptions {
  int trajectories = 20;
  double duration = 10.0;
  double dt = 1.0e-3;
  int sample_times = 10;
  uint64_t seed = 90210;
};

struct RcacOracleReport {
  double max_rel_error = 0.0;
  int comparisons = 0;
  // Location of the worst comparison.
  int worst_row = -1;
  int worst_trajectory = -1;
  double worst_time = 0.0;
  std::vector<double> per_row_max;
};

/// Propagates the optimizer along seeded random bounded signal trajectories
/// and compares theta* = P b against the batch minimizer at sampled times.
RcacOracleReport rcac_oracle_check(const std::vector<RcacHyperparams>& rows,
                                   const RcacOracleOptions& options = {});

}  // namespace rcacsim

#endif  // RCACSIM_RCAC_HPP_
