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

#ifndef RCACSIM_ERRORS_HPP_
#define RCACSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rcacsim {

/// Bad configuration or bad input data, detected before or during a run.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pitch too close to +-pi/2 for the 3-2-1 Euler machinery.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulation state left the finite (or positive definite) regime.
/// Carries the simulation time at which the failure was detected.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what + " at t = " + std::to_string(time) + " s"),
        time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace rcacsim

#endif  // RCACSIM_ERRORS_HPP_
