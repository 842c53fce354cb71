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

#ifndef RCACSIM_LTI_FILTER_HPP_
#define RCACSIM_LTI_FILTER_HPP_

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace rcacsim {

/// A scalar transfer function given by polynomial coefficients in ascending
/// degree, e.g. 1/((s+1.5)(s+3)) is num = {1}, den = {4.5, 4.5, 1}.
/// The denominator is normalized to be monic on construction.
struct TransferFunction {
  std::vector<double> num{1.0};
  std::vector<double> den{1.0, 1.0};

  TransferFunction() = default;
  TransferFunction(std::vector<double> numerator,
                   std::vector<double> denominator);

  int order() const { return static_cast<int>(den.size()) - 1; }

  std::complex<double> evaluate(std::complex<double> s) const;
  double dc_gain() const { return evaluate(0.0).real(); }

  /// Poles of the denominator (companion-matrix eigenvalues).
  std::vector<std::complex<double>> poles() const;

  /// Throws ValidationError unless strictly proper and asymptotically stable.
  void validate() const;
};

/// Strictly proper SISO state-space realization, xdot = A x + B u, y = C x.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;

  int order() const { return static_cast<int>(A.rows()); }
  std::complex<double> evaluate(std::complex<double> s) const;
};

/// Controllable canonical form of a validated strictly proper stable
/// transfer function. Throws ValidationError otherwise.
StateSpace realize(const TransferFunction& tf);

/// A bank of independent copies of one SISO filter, one per input channel.
/// The state is an (order x channels) matrix; column j belongs to channel j.
/// All states start at zero.
struct FilterBank {
  StateSpace ss;
  Eigen::MatrixXd x;

  FilterBank() = default;
  FilterBank(const StateSpace& realization, int channels)
      : ss(realization),
        x(Eigen::MatrixXd::Zero(realization.order(), channels)) {}

  int channels() const { return static_cast<int>(x.cols()); }
  Eigen::RowVectorXd output() const { return ss.C * x; }
};

/// xdot = A x + B input, one column per channel. Throws ValidationError on a
/// channel-count mismatch. `x` and `x_dot` must be (order x channels).
void filter_derivative(const StateSpace& ss,
                       const Eigen::Ref<const Eigen::MatrixXd>& x,
                       const Eigen::Ref<const Eigen::RowVectorXd>& input,
                       Eigen::Ref<Eigen::MatrixXd> x_dot);

/// y = C x per channel (strictly proper: no feedthrough).
Eigen::RowVectorXd filter_output(const StateSpace& ss,
                                 const Eigen::Ref<const Eigen::MatrixXd>& x);

}  // namespace rcacsim

#endif  // RCACSIM_LTI_FILTER_HPP_
