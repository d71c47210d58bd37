// Copyright 2026 The pmimask Authors.
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

#ifndef PMIMASK_RNG_H_
#define PMIMASK_RNG_H_

#include <array>
#include <cstdint>

namespace pmimask {

// xoshiro256** seeded through splitmix64. All derived quantities (integers,
// doubles) are computed with explicit bit arithmetic so that a given seed
// yields the same stream on every platform; std:: distributions are
// implementation-defined and are never used for anything that is written out.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Independent stream for item `index` under a global seed.
  static Rng ForStream(uint64_t global_seed, uint64_t index);

  uint64_t Next();

  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t UniformInt(uint64_t bound);

  // Uniform integer in [lo, hi], inclusive.
  uint64_t UniformRange(uint64_t lo, uint64_t hi) {
    return lo + UniformInt(hi - lo + 1);
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double UniformDouble();

 private:
  std::array<uint64_t, 4> state_;
};

uint64_t SplitMix64(uint64_t& state);

}  // namespace pmimask

#endif  // PMIMASK_RNG_H_
