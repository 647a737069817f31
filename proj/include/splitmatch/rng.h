// Copyright 2026 Splitmatch Contributors
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

#ifndef SPLITMATCH_RNG_H
#define SPLITMATCH_RNG_H

#include <cstdint>

namespace splitmatch {

/// Stateless counter-based randomness: every (seed, shot, stream) triple maps
/// to one uniform variate, so shots can be evaluated in any order, on any
/// number of workers, with identical results.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t counter_bits(uint64_t seed, uint64_t shot, uint64_t stream) {
  uint64_t h = mix64(seed ^ 0xd6e8feb86659fd93ull);
  h = mix64(h ^ shot);
  h = mix64(h ^ stream);
  return h;
}

/// Uniform double in [0, 1).
inline double counter_uniform(uint64_t seed, uint64_t shot, uint64_t stream) {
  return static_cast<double>(counter_bits(seed, shot, stream) >> 11) * 0x1.0p-53;
}

}  // namespace splitmatch

#endif  // SPLITMATCH_RNG_H
