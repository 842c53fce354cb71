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

#ifndef RCACSIM_NOISE_HPP_
#define RCACSIM_NOISE_HPP_

#include <cmath>
#include <cstdint>

namespace rcacsim {

/// Counter-based uniform generator (splitmix64 over seed ^ counter).
/// Fully specified here so sequences are reproducible across platforms and
/// standard libraries.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t next_bits() {
    uint64_t x = seed_ + 0x9e3779b97f4a7c15ULL * (++counter_);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform double in (0, 1].
  double next_uniform() {
    return (static_cast<double>(next_bits() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next_bits() >> 11) * 0x1.0p-53);
  }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

/// Standard-normal draws via Box-Muller on the counter generator.
class GaussianNoise {
 public:
  explicit GaussianNoise(uint64_t seed) : rng_(seed) {}

  double sample() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = rng_.next_uniform();
    const double u2 = rng_.next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  double sample(double sigma) { return sigma * sample(); }

 private:
  CounterRng rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rcacsim

#endif  // RCACSIM_NOISE_HPP_
