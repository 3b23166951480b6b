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

#include "latent_ldp/random.h"

namespace latent_ldp {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 MakeEngine(uint64_t seed, uint64_t stream) {
  const uint64_t a = SplitMix64(seed);
  const uint64_t b = SplitMix64(a ^ SplitMix64(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                    static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomSource::RandomSource(uint64_t seed, uint64_t stream)
    : seed_(seed), stream_(stream), engine_(MakeEngine(seed, stream)) {}

double RandomSource::Uniform() {
  // (k + 0.5) / 2^53 for a 53-bit k lies strictly inside (0, 1).
  const uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

RandomSource RandomSource::Derive(uint64_t stream) const {
  return RandomSource(SplitMix64(seed_ ^ SplitMix64(stream_)), stream);
}

}  // namespace latent_ldp
