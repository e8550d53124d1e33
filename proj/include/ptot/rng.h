// Copyright 2026 The ptot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace ptot {

// Seedable generator with platform-independent output. The engine is
// std::mt19937_64, whose sequence is fixed by the standard; the
// transforms below are written out because std::*_distribution results
// differ between standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  uint64_t UniformIndex(uint64_t bound);

  // Standard normal via Box-Muller. Consumes two draws per call.
  double Normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent child seed from (seed, stream). SplitMix64 finalizer.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

}  // namespace ptot
