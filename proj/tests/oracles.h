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

// Reference computations that share no code path with the library's walk:
// flat cumulative intervals from sorted class sequences, and exhaustive
// dyadic-cell search.

#ifndef SEMSTEG_TESTS_ORACLES_H_
#define SEMSTEG_TESTS_ORACLES_H_

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semsteg/semantic_space.h"

namespace semsteg::oracle {

struct FlatInterval {
  mpq_class low;
  mpq_class high;
};

// Orders classes by canonical rank sequence with the end of a sequence
// (stop) after every continuation, then lays them out cumulatively.
inline std::map<SemType, FlatInterval> FlatIntervals(
    const std::map<SemType, std::uint64_t>& counts, const OntologyTree& tree) {
  constexpr auto kEnd = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::pair<std::vector<std::uint32_t>, SemType>> keyed;
  std::uint64_t total = 0;
  for (const auto& [type, count] : counts) {
    std::vector<std::uint32_t> key;
    for (const auto& [id, n] : type.counts()) {
      key.insert(key.end(), n, tree.rank(id));
    }
    std::sort(key.begin(), key.end());
    key.push_back(kEnd);
    keyed.emplace_back(std::move(key), type);
    total += count;
  }
  std::sort(keyed.begin(), keyed.end());
  std::map<SemType, FlatInterval> out;
  mpq_class low = 0;
  for (const auto& [key, type] : keyed) {
    mpq_class p(counts.at(type), total);
    p.canonicalize();
    out[type] = FlatInterval{low, low + p};
    low += p;
  }
  return out;
}

// Longest bit string whose dyadic cell contains [low, high), found by
// enumerating every string of each length.
// Longest s such that the dyadic cell of s contains [low, high), found by
// testing, at each length, the only cell that can hold `low`.
inline std::string BruteForceSharedPrefix(const mpq_class& low,
                                          const mpq_class& high) {
  std::string best;
  for (int n = 1;; ++n) {
    const mpz_class scale = mpz_class(1) << n;
    mpq_class scaled = low * scale;
    mpz_class s = scaled.get_num() / scaled.get_den();
    mpq_class cell_low(s, scale);
    mpq_class cell_high(s + 1, scale);
    cell_low.canonicalize();
    cell_high.canonicalize();
    if (!(cell_low <= low && high <= cell_high)) break;
    best.clear();
    for (int k = n - 1; k >= 0; --k) {
      best.push_back(mpz_tstbit(s.get_mpz_t(), k) ? '1' : '0');
    }
  }
  return best;
}

inline mpq_class DyadicValue(const std::string& bits) {
  mpq_class v = 0;
  mpq_class w(1, 2);
  for (char c : bits) {
    if (c == '1') v += w;
    w /= 2;
  }
  return v;
}

}  // namespace semsteg::oracle

#endif  // SEMSTEG_TESTS_ORACLES_H_
