// Copyright 2026 The gnphys Authors
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

#ifndef GNPHYS_RNG_H_
#define GNPHYS_RNG_H_

#include <cmath>
#include <cstdint>

namespace gnphys {

// Deterministic, platform-independent PRNG (splitmix64 core). All randomness
// in the project flows from a single master seed, split hierarchically with
// fork() so that parallel consumers (episodes, batches, seeds of a sweep)
// stay reproducible regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection-free modulo; bias is negligible for n << 2^64 and the
    // sequence stays identical across platforms.
    return next_u64() % n;
  }

  // Standard normal via Box-Muller (always consumes two uniforms).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // Derive an independent child stream. Distinct `stream` values give
  // decorrelated generators; the parent state is not advanced.
  Rng fork(std::uint64_t stream) const {
    Rng mix(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    mix.next_u64();
    return Rng(mix.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace gnphys

#endif  // GNPHYS_RNG_H_
