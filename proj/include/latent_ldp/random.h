// Copyright 2026 The Latent LDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LATENT_LDP_RANDOM_H_
#define LATENT_LDP_RANDOM_H_

#include <cstdint>
#include <random>

namespace latent_ldp {

// Seedable uniform source on the open interval (0, 1).
//
// The (seed, stream) pair fully determines the output sequence on every
// platform: the engine is mt19937_64 and the double conversion is done here
// rather than through std::uniform_real_distribution, whose algorithm is
// implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed, uint64_t stream = 0);

  // Uniform in (0, 1); never returns 0 or 1.
  double Uniform();

  // Raw 64 random bits.
  uint64_t NextBits() { return engine_(); }

  // Independent source for a sub-task, keyed by its index.
  RandomSource Derive(uint64_t stream) const;

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace latent_ldp

#endif  // LATENT_LDP_RANDOM_H_
