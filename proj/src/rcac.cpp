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

#include "rcacsim/rcac.hpp"

#include <cmath>

#include "rcacsim/errors.hpp"
#include "rcacsim/integrator.hpp"
#include "rcacsim/noise.hpp"

namespace rcacsim {

void RcacHyperparams::validate() const {
  if (!(rz > 0.0) || !std::isfinite(rz)) {
    throw ValidationError("rcac: rz must be positive and finite");
  }
  if (!(p0 > 0.0) || !std::isfinite(p0)) {
    throw ValidationError("rcac: p0 must be positive and finite");
  }
  gf.validate();
}

void rcac_information_derivative(
    const Eigen::Ref<const Eigen::RowVectorXd>& phi_f, double u_f, double z,
    double rz, Eigen::Ref<Eigen::MatrixXd> Pi_dot,
    Eigen::Ref<Eigen::VectorXd> b_dot) {
  // Outer product first, scalar scale second: entry (i,j) is then
  // rz*(phi_i*phi_j), bitwise equal to entry (j,i). Folding rz into one
  // factor first would round (rz*phi_i)*phi_j differently from its mirror
  // and let asymmetry creep into the accumulated information.
  Pi_dot.noalias() = phi_f.transpose() * phi_f;
  Pi_dot *= rz;
  b_dot.noalias() = (-rz * (z - u_f)) * phi_f.transpose();
}

void rcac_pb_derivative(const Eigen::Ref<const Eigen::MatrixXd>& P,
                        const Eigen::Ref<const Eigen::RowVectorXd>& phi_f,
                        double u_f, double z, double rz,
                        Eigen::Ref<Eigen::MatrixXd> P_dot,
                        Eigen::Ref<Eigen::VectorXd> b_dot) {
  // g = phi_f P; the outer product -Rz g^T g is symmetric to the bit, so P
  // stays symmetric under any Runge-Kutta combination of derivatives.
  const Eigen::RowVectorXd g = phi_f * P;
  P_dot.noalias() = (-rz) * (g.transpose() * g);
  b_dot.noalias() = (-rz * (z - u_f)) * phi_f.transpose();
}

RcacAxis::RcacAxis(const RcacHyperparams& hyper, int regressor_size)
    : hyper_(hyper), l_(regressor_size) {
  if (regressor_size < 1) {
    throw ValidationError("rcac: regressor size must be at least 1");
  }
  hyper_.validate();
  gf_ = realize(hyper_.gf);
  nf_ = gf_.order();
}

void RcacAxis::initial_state(Eigen::Ref<Eigen::VectorXd> x,
                             const Eigen::VectorXd* theta0) const {
  if (x.size() != state_size()) {
    throw ValidationError("rcac: state size mismatch");
  }
  x.setZero();
  Eigen::Map<Eigen::MatrixXd> Pi(x.data(), l_, l_);
  Pi.diagonal().setConstant(1.0 / hyper_.p0);
  if (theta0 != nullptr) {
    if (theta0->size() != l_) {
      throw ValidationError("rcac: initial gain size mismatch");
    }
    x.segment(l_ * l_, l_) = *theta0 / hyper_.p0;
  }
}

void RcacAxis::derivative(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::RowVectorXd>& phi,
                          double u, double z,
                          Eigen::Ref<Eigen::VectorXd> x_dot) const {
  if (!phi.allFinite() || !std::isfinite(u) || !std::isfinite(z)) {
    throw ValidationError("rcac: non-finite sample (phi, u, z)");
  }
  if (phi.size() != l_ || x.size() != state_size() ||
      x_dot.size() != state_size()) {
    throw ValidationError("rcac: sample/state size mismatch");
  }

  const int np = l_ * l_;
  Eigen::Map<const Eigen::MatrixXd> x_phi(x.data() + np + l_, nf_, l_);
  Eigen::Map<const Eigen::MatrixXd> x_u(x.data() + np + l_ + nf_ * l_, nf_, 1);

  Eigen::Map<Eigen::MatrixXd> Pi_dot(x_dot.data(), l_, l_);
  Eigen::Map<Eigen::VectorXd> b_dot(x_dot.data() + np, l_);
  Eigen::Map<Eigen::MatrixXd> x_phi_dot(x_dot.data() + np + l_, nf_, l_);
  Eigen::Map<Eigen::MatrixXd> x_u_dot(x_dot.data() + np + l_ + nf_ * l_, nf_,
                                      1);

  const Eigen::RowVectorXd phi_f = gf_.C * x_phi;
  const double u_f = (gf_.C * x_u)(0);

  rcac_information_derivative(phi_f, u_f, z, hyper_.rz, Pi_dot, b_dot);

  x_phi_dot.noalias() = gf_.A * x_phi;
  x_phi_dot.noalias() += gf_.B * phi;
  x_u_dot.noalias() = gf_.A * x_u;
  x_u_dot.noalias() += gf_.B * u;
}

Eigen::VectorXd RcacAxis::gains(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::Map<const Eigen::VectorXd> b(x.data() + l_ * l_, l_);
  if (l_ == 3) {
    // Fixed-size fast path: gains are read several times per integration
    // step, so the common 3-gain axis avoids heap traffic.
    const Eigen::Matrix3d Pi = Eigen::Map<const Eigen::Matrix3d>(x.data());
    return Pi.ldlt().solve(Eigen::Vector3d(b.head<3>()));
  }
  Eigen::Map<const Eigen::MatrixXd> Pi(x.data(), l_, l_);
  return Pi.ldlt().solve(b);
}

Eigen::MatrixXd RcacAxis::information(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), l_, l_);
}

Eigen::MatrixXd RcacAxis::covariance(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::Map<const Eigen::MatrixXd> Pi(x.data(), l_, l_);
  const Eigen::MatrixXd P = Eigen::MatrixXd(Pi).inverse();
  return 0.5 * (P + P.transpose());
}

Eigen::VectorXd RcacAxis::offset(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return x.segment(l_ * l_, l_);
}

Eigen::RowVectorXd RcacAxis::filtered_regressor(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::Map<const Eigen::MatrixXd> x_phi(x.data() + l_ * l_ + l_, nf_, l_);
  return gf_.C * x_phi;
}

double RcacAxis::filtered_control(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::Map<const Eigen::MatrixXd> x_u(
      x.data() + l_ * l_ + l_ + nf_ * l_, nf_, 1);
  return (gf_.C * x_u)(0);
}

double RcacAxis::symmetry_error(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::Map<const Eigen::MatrixXd> Pi(x.data(), l_, l_);
  return (Pi - Pi.transpose()).norm();
}

double RcacAxis::min_covariance_eigenvalue(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::Map<const Eigen::MatrixXd> Pi(x.data(), l_, l_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (Pi + Pi.transpose()), Eigen::EigenvaluesOnly);
  // Eigenvalues of P are the reciprocals of those of Pi (same eigenvectors).
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < 0.0) return 1.0 / lo;
  if (hi <= 0.0) return 0.0;
  return 1.0 / hi;
}

void RcacAxis::check_health(const Eigen::Ref<const Eigen::VectorXd>& x,
                            double time) const {
  if (symmetry_error(x) >= 1e-9) {
    throw DivergenceError("rcac: covariance lost symmetry", time);
  }
  // Information accumulates: every increment of Pi is positive semidefinite,
  // so its smallest eigenvalue can never drop below the initial 1/p0 (the
  // covariance can never exceed its initial scale, and in particular stays
  // positive definite). A violation therefore indicates the integration has
  // corrupted the optimizer state.
  Eigen::Map<const Eigen::MatrixXd> Pi(x.data(), l_, l_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (Pi + Pi.transpose()), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < (1.0 - 1e-9) / hyper_.p0) {
    throw DivergenceError(
        "rcac: covariance lost positive definiteness "
        "(integration step too large)",
        time);
  }
}

Eigen::VectorXd rcac_batch_minimizer(
    const std::vector<double>& times,
    const std::vector<Eigen::RowVectorXd>& phi_f,
    const std::vector<double>& u_f, const std::vector<double>& z, double rz,
    double p0) {
  const size_t n = times.size();
  if (n == 0 || phi_f.size() != n || u_f.size() != n || z.size() != n) {
    throw ValidationError("rcac batch: empty or mismatched history");
  }
  const int l = static_cast<int>(phi_f.front().size());

  Eigen::MatrixXd normal = (1.0 / p0) * Eigen::MatrixXd::Identity(l, l);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(l);
  for (size_t k = 0; k < n; ++k) {
    double w = 0.0;
    if (k > 0) {
      w += 0.5 * (times[k] - times[k - 1]);
    }
    if (k + 1 < n) {
      w += 0.5 * (times[k + 1] - times[k]);
    }
    if (w == 0.0) {
      continue;
    }
    normal.noalias() += (w * rz) * (phi_f[k].transpose() * phi_f[k]);
    rhs.noalias() -= (w * rz * (z[k] - u_f[k])) * phi_f[k].transpose();
  }
  return normal.ldlt().solve(rhs);
}

namespace {

// Bounded, smooth, seeded test signal: a short sum of sinusoids.
class SinusoidMix {
 public:
  SinusoidMix(CounterRng& rng, int terms = 4) {
    for (int i = 0; i < terms; ++i) {
      amplitude_.push_back(rng.next_uniform(-1.0, 1.0));
      frequency_.push_back(rng.next_uniform(0.1, 3.0));
      phase_.push_back(rng.next_uniform(0.0, 6.283185307179586));
    }
  }

  double operator()(double t) const {
    double acc = 0.0;
    for (size_t i = 0; i < amplitude_.size(); ++i) {
      acc += amplitude_[i] * std::sin(frequency_[i] * t + phase_[i]);
    }
    return acc;
  }

 private:
  std::vector<double> amplitude_, frequency_, phase_;
};

}  // namespace

RcacOracleReport rcac_oracle_check(const std::vector<RcacHyperparams>& rows,
                                   const RcacOracleOptions& options) {
  RcacOracleReport report;
  report.per_row_max.assign(rows.size(), 0.0);

  const int l = 3;
  const long n_steps = std::lround(options.duration / options.dt);
  const long sample_every =
      std::max(1L, n_steps / std::max(1, options.sample_times));

  for (size_t row = 0; row < rows.size(); ++row) {
    const RcacAxis axis(rows[row], l);
    for (int traj = 0; traj < options.trajectories; ++traj) {
      CounterRng rng(options.seed + 1000003ULL * row + 17ULL * traj);
      std::vector<SinusoidMix> phi_sig;
      for (int i = 0; i < l; ++i) {
        phi_sig.emplace_back(rng);
      }
      const SinusoidMix u_sig(rng);
      const SinusoidMix z_sig(rng);

      const auto phi_at = [&](double t) {
        Eigen::RowVectorXd phi(l);
        for (int i = 0; i < l; ++i) {
          phi(i) = phi_sig[static_cast<size_t>(i)](t);
        }
        return phi;
      };

      Eigen::VectorXd x(axis.state_size());
      axis.initial_state(x);

      std::vector<double> times{0.0};
      std::vector<Eigen::RowVectorXd> phi_f_hist{axis.filtered_regressor(x)};
      std::vector<double> u_f_hist{axis.filtered_control(x)};
      std::vector<double> z_hist{z_sig(0.0)};

      Rk4Workspace ws(axis.state_size());
      const auto deriv = [&](double t, const Eigen::VectorXd& state,
                             Eigen::VectorXd& state_dot) {
        axis.derivative(state, phi_at(t), u_sig(t), z_sig(t), state_dot);
      };

      for (long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * options.dt;
        ws.step(deriv, t, options.dt, x);
        const double t_next = static_cast<double>(k + 1) * options.dt;
        times.push_back(t_next);
        phi_f_hist.push_back(axis.filtered_regressor(x));
        u_f_hist.push_back(axis.filtered_control(x));
        z_hist.push_back(z_sig(t_next));

        if ((k + 1) % sample_every == 0) {
          const Eigen::VectorXd theta_ode = axis.gains(x);
          const Eigen::VectorXd theta_batch = rcac_batch_minimizer(
              times, phi_f_hist, u_f_hist, z_hist, rows[row].rz, rows[row].p0);
          const double rel = (theta_ode - theta_batch).norm() /
                             (theta_batch.norm() + 1e-12);
          ++report.comparisons;
          report.per_row_max[row] = std::max(report.per_row_max[row], rel);
          if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_row = static_cast<int>(row);
            report.worst_trajectory = traj;
            report.worst_time = t_next;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace rcacsim
