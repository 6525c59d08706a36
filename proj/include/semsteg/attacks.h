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

// Token-level perturbations of stego sentences.

#ifndef SEMSTEG_ATTACKS_H_
#define SEMSTEG_ATTACKS_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semsteg/error.h"
#include "semsteg/rng.h"
#include "semsteg/semantic_space.h"
#include "semsteg/unicode.h"

namespace semsteg {

enum class AttackKind { kInsert, kDelete, kReplace, kSwap };

inline constexpr AttackKind kAllAttackKinds[] = {
    AttackKind::kInsert, AttackKind::kDelete, AttackKind::kReplace,
    AttackKind::kSwap};

inline std::string_view AttackKindName(AttackKind k) {
  switch (k) {
    case AttackKind::kInsert: return "insert";
    case AttackKind::kDelete: return "delete";
    case AttackKind::kReplace: return "replace";
    case AttackKind::kSwap: return "swap";
  }
  return "?";
}

inline AttackKind ParseAttackKind(std::string_view name) {
  for (AttackKind k : kAllAttackKinds) {
    if (AttackKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kConfig, "unknown attack kind '" + std::string(name) +
                                      "' (insert, delete, replace, swap)");
}

struct AttackSpec {
  AttackKind kind = AttackKind::kInsert;
  int count = 1;  // perturbations per sentence
  std::uint64_t seed = 0;
  // Touch only tokens outside entity mentions, and never split a mention.
  bool protect_entities = false;

  void Validate() const {
    if (count < 1 || count > 1000) {
      throw Error(ErrorCode::kConfig, "attack count must be in [1, 1000]");
    }
  }
};

struct AttackResult {
  std::string sentence;
  int applied = 0;
  bool degenerate = false;  // fewer perturbations than requested were possible
};

namespace internal {

struct Token {
  std::string text;
  int mention;  // -1 outside entity mentions
};

}  // namespace internal

// Applies spec.count perturbations drawn from a generator seeded by
// (spec.seed, stream). `tree` is needed only when protecting entities.
inline AttackResult Attack(std::string_view sentence, const AttackSpec& spec,
                           const OntologyTree* tree = nullptr,
                           std::uint64_t stream = 0) {
  spec.Validate();
  using internal::Token;
  if (spec.protect_entities && tree == nullptr) {
    throw Error(ErrorCode::kInternal, "entity protection needs the tree");
  }
  std::vector<Token> tokens;
  {
    const auto words = unicode::SplitWhitespace(sentence);
    std::vector<int> spans(words.size(), -1);
    if (spec.protect_entities) spans = MentionTokenSpans(sentence, *tree);
    for (std::size_t i = 0; i < words.size(); ++i) {
      tokens.push_back(Token{std::string(words[i]), spans[i]});
    }
  }
  AttackResult result;
  auto rebuild = [&] {
    std::string out;
    for (const Token& t : tokens) {
      if (!out.empty()) out += ' ';
      out += t.text;
    }
    return out;
  };
  if (tokens.size() < 2) {
    result.sentence = std::string(sentence);
    result.degenerate = true;
    return result;
  }

  SeededRng rng(MixSeed({spec.seed, stream}));
  auto free_tokens = [&] {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].mention < 0) out.push_back(i);
    }
    return out;
  };
  auto pick = [&](const std::vector<std::size_t>& v) {
    return v[rng.UniformIndex(v.size())];
  };

  for (int step = 0; step < spec.count; ++step) {
    if (tokens.size() < 2) break;
    const std::vector<std::size_t> eligible = free_tokens();
    bool done = false;
    switch (spec.kind) {
      case AttackKind::kInsert: {
        if (eligible.empty()) break;
        const Token copy{tokens[pick(eligible)].text, -1};
        std::vector<std::size_t> gaps;
        for (std::size_t g = 0; g <= tokens.size(); ++g) {
          const bool inside = g > 0 && g < tokens.size() &&
                              tokens[g - 1].mention >= 0 &&
                              tokens[g - 1].mention == tokens[g].mention;
          if (!inside) gaps.push_back(g);
        }
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pick(gaps)),
                      copy);
        done = true;
        break;
      }
      case AttackKind::kDelete: {
        if (eligible.empty()) break;
        tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(pick(eligible)));
        done = true;
        break;
      }
      case AttackKind::kReplace: {
        if (eligible.empty()) break;
        const std::size_t victim = pick(eligible);
        std::set<std::string> pool;
        for (std::size_t i : eligible) pool.insert(tokens[i].text);
        pool.erase(tokens[victim].text);
        if (pool.empty()) break;
        auto it = pool.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(rng.UniformIndex(pool.size())));
        tokens[victim].text = *it;
        done = true;
        break;
      }
      case AttackKind::kSwap: {
        if (eligible.size() < 2) break;
        const std::size_t a = rng.UniformIndex(eligible.size());
        std::size_t b = rng.UniformIndex(eligible.size() - 1);
        if (b >= a) ++b;
        std::swap(tokens[eligible[a]].text, tokens[eligible[b]].text);
        done = true;
        break;
      }
    }
    if (!done) break;
    ++result.applied;
  }
  result.degenerate = result.applied < spec.count;
  result.sentence = rebuild();
  return result;
}

}  // namespace semsteg

#endif  // SEMSTEG_ATTACKS_H_
