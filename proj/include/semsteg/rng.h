// Copyright 2026 The Semsteg Authors.
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

// Seeded randomness with replayable output. Draws avoid the standard
// distributions, whose results differ between library implementations.

#ifndef SEMSTEG_RNG_H_
#define SEMSTEG_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <string_view>

namespace semsteg {

inline std::uint64_t Fnv1a(std::string_view data,
                           std::uint64_t hash = 14695981039346656037ull) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

inline std::uint64_t MixSeed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t hash = 14695981039346656037ull;
  for (std::uint64_t p : parts) {
    for (int i = 0; i < 8; ++i) {
      hash ^= (p >> (8 * i)) & 0xff;
      hash *= 1099511628211ull;
    }
  }
  return hash;
}

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, n) by rejection; n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace semsteg

#endif  // SEMSTEG_RNG_H_
