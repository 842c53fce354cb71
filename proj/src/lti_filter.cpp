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

#include "rcacsim/lti_filter.hpp"

#include <cmath>

#include "rcacsim/errors.hpp"

namespace rcacsim {
namespace {

// Degree after discarding vanishing leading coefficients.
int effective_degree(const std::vector<double>& coeffs) {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    if (coeffs[static_cast<size_t>(i)] != 0.0) {
      return i;
    }
  }
  return -1;
}

std::complex<double> horner(const std::vector<double>& coeffs,
                            std::complex<double> s) {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

}  // namespace

TransferFunction::TransferFunction(std::vector<double> numerator,
                                   std::vector<double> denominator)
    : num(std::move(numerator)), den(std::move(denominator)) {
  const int dd = effective_degree(den);
  if (dd < 0) {
    throw ValidationError("transfer function: zero denominator");
  }
  den.resize(static_cast<size_t>(dd) + 1);
  const double lead = den.back();
  for (double& c : den) {
    c /= lead;
  }
  for (double& c : num) {
    c /= lead;
  }
}

std::complex<double> TransferFunction::evaluate(std::complex<double> s) const {
  return horner(num, s) / horner(den, s);
}

std::vector<std::complex<double>> TransferFunction::poles() const {
  const int n = order();
  if (n <= 0) {
    return {};
  }
  // Companion matrix of the monic denominator.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  companion.bottomLeftCorner(n - 1, n - 1).setIdentity();
  for (int i = 0; i < n; ++i) {
    companion(0, i) = -den[static_cast<size_t>(n - 1 - i)];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] = eig.eigenvalues()(i);
  }
  return out;
}

void TransferFunction::validate() const {
  for (double c : num) {
    if (!std::isfinite(c)) {
      throw ValidationError("transfer function: non-finite numerator");
    }
  }
  for (double c : den) {
    if (!std::isfinite(c)) {
      throw ValidationError("transfer function: non-finite denominator");
    }
  }
  const int dn = effective_degree(num);
  const int dd = effective_degree(den);
  if (dn < 0) {
    throw ValidationError("transfer function: zero numerator");
  }
  if (dn >= dd) {
    throw ValidationError("transfer function: must be strictly proper");
  }
  for (const auto& pole : poles()) {
    if (pole.real() >= 0.0) {
      throw ValidationError("transfer function: unstable pole at Re(s) = " +
                            std::to_string(pole.real()));
    }
  }
}

std::complex<double> StateSpace::evaluate(std::complex<double> s) const {
  const int n = order();
  Eigen::MatrixXcd resolvent =
      s * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
  Eigen::VectorXcd v = resolvent.partialPivLu().solve(B.cast<std::complex<double>>());
  return (C.cast<std::complex<double>>() * v)(0);
}

StateSpace realize(const TransferFunction& tf) {
  tf.validate();
  const int n = tf.order();

  StateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.A.topRightCorner(n - 1, n - 1).setIdentity();
  for (int i = 0; i < n; ++i) {
    ss.A(n - 1, i) = -tf.den[static_cast<size_t>(i)];
  }
  ss.B = Eigen::VectorXd::Zero(n);
  ss.B(n - 1) = 1.0;
  ss.C = Eigen::RowVectorXd::Zero(n);
  // Strict properness guarantees coefficients beyond degree n-1 vanish.
  for (size_t i = 0; i < tf.num.size() && i < static_cast<size_t>(n); ++i) {
    ss.C(static_cast<Eigen::Index>(i)) = tf.num[i];
  }
  return ss;
}

void filter_derivative(const StateSpace& ss,
                       const Eigen::Ref<const Eigen::MatrixXd>& x,
                       const Eigen::Ref<const Eigen::RowVectorXd>& input,
                       Eigen::Ref<Eigen::MatrixXd> x_dot) {
  if (x.cols() != input.cols() || x.rows() != ss.order() ||
      x_dot.rows() != x.rows() || x_dot.cols() != x.cols()) {
    throw ValidationError("filter_derivative: channel/state shape mismatch");
  }
  x_dot.noalias() = ss.A * x;
  x_dot.noalias() += ss.B * input;
}

Eigen::RowVectorXd filter_output(const StateSpace& ss,
                                 const Eigen::Ref<const Eigen::MatrixXd>& x) {
  if (x.rows() != ss.order()) {
    throw ValidationError("filter_output: state shape mismatch");
  }
  return ss.C * x;
}

}  // namespace rcacsim
