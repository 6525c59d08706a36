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

// Evaluation metrics for stego runs.

#ifndef SEMSTEG_METRICS_H_
#define SEMSTEG_METRICS_H_

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semsteg/error.h"
#include "semsteg/unicode.h"

namespace semsteg {

// 1 - (1 - p)^n: chance that at least one of n attempts succeeds when each
// succeeds independently with probability p.
inline double MsrEstimate(double p, double n) {
  if (!(p >= 0 && p <= 1) || !(n >= 0)) {
    throw Error(ErrorCode::kValidation, "msr_estimate needs p in [0,1], n >= 0");
  }
  return 1 - std::pow(1 - p, n);
}

// The n at which MsrEstimate(p, n) reaches `target`.
inline double MsrAttemptsFor(double p, double target) {
  if (!(p > 0 && p < 1) || !(target >= 0 && target < 1)) {
    throw Error(ErrorCode::kValidation,
                "msr attempts need p in (0,1), target in [0,1)");
  }
  return std::log1p(-target) / std::log1p(-p);
}

// Unique n-grams over all n-grams, per-sentence whitespace tokens.
inline double DistinctN(const std::vector<std::string>& sentences, int n) {
  if (n < 1) throw Error(ErrorCode::kValidation, "distinct-n needs n >= 1");
  std::set<std::vector<std::string_view>> unique;
  std::size_t total = 0;
  for (const std::string& s : sentences) {
    const auto tokens = unicode::SplitWhitespace(s);
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size();
         ++i) {
      unique.emplace(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                     tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
      ++total;
    }
  }
  if (total == 0) {
    throw Error(ErrorCode::kValidation,
                "no " + std::to_string(n) + "-grams in the corpus");
  }
  return static_cast<double>(unique.size()) / static_cast<double>(total);
}

struct EmbeddingRate {
  double bits_per_sentence = 0;
  double bits_per_token = 0;
};

inline EmbeddingRate ComputeEmbeddingRate(
    const std::vector<std::size_t>& bits_embedded,
    const std::vector<std::string>& sentences) {
  if (bits_embedded.size() != sentences.size() || sentences.empty()) {
    throw Error(ErrorCode::kValidation,
                "embedding rate needs one bit count per sentence");
  }
  double bits = 0;
  double tokens = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    bits += static_cast<double>(bits_embedded[i]);
    tokens += static_cast<double>(unicode::SplitWhitespace(sentences[i]).size());
  }
  return {bits / static_cast<double>(sentences.size()),
          tokens > 0 ? bits / tokens : 0};
}

struct RateBucket {
  std::size_t total = 0;
  std::size_t success = 0;
  double rate() const {
    return total == 0 ? 0 : static_cast<double>(success) /
                                static_cast<double>(total);
  }
};

// Success counts keyed by type length. Lengths 1-4 are always present.
class SuccessTable {
 public:
  SuccessTable() {
    for (std::uint64_t len = 1; len <= 4; ++len) buckets_[len];
  }

  void Add(std::uint64_t type_len, bool success) {
    RateBucket& b = buckets_[type_len];
    ++b.total;
    if (success) ++b.success;
  }

  RateBucket Overall() const {
    RateBucket all;
    for (const auto& [len, b] : buckets_) {
      all.total += b.total;
      all.success += b.success;
    }
    return all;
  }

  const std::map<std::uint64_t, RateBucket>& buckets() const { return buckets_; }

 private:
  std::map<std::uint64_t, RateBucket> buckets_;
};

// Counts of sentences approved after 0, 1, 2, ... regenerations.
inline std::map<int, std::size_t> IterationHistogram(
    const std::vector<int>& iterations) {
  std::map<int, std::size_t> h;
  for (int i = 0; i <= 3; ++i) h[i];
  for (int i : iterations) ++h[i];
  return h;
}

}  // namespace semsteg

#endif  // SEMSTEG_METRICS_H_
