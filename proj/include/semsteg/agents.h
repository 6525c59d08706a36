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

// Generation, check and extraction agents, the feedback loop that drives
// them, and an offline mock backend.

#ifndef SEMSTEG_AGENTS_H_
#define SEMSTEG_AGENTS_H_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semsteg/error.h"
#include "semsteg/rng.h"
#include "semsteg/semantic_space.h"

namespace semsteg {

enum class AgentRole { kGenerate, kCheck, kExtract };

// Passed through unchanged to live models. Never derived from secret bits.
struct SamplingParams {
  double temperature = 0.8;
  double top_p = 0.8;
  bool operator==(const SamplingParams&) const = default;
};

struct FeedbackConfig {
  static constexpr int kMaxIterationsLimit = 100;
  int max_iterations = 5;  // regenerations allowed after the first attempt
  SamplingParams sampling;

  void Validate() const {
    if (max_iterations < 1 || max_iterations > kMaxIterationsLimit) {
      throw Error(ErrorCode::kConfig,
                  "max_iterations must be in [1, " +
                      std::to_string(kMaxIterationsLimit) + "]");
    }
    if (!(sampling.temperature >= 0 && sampling.temperature <= 2) ||
        !(sampling.top_p > 0 && sampling.top_p <= 1)) {
      throw Error(ErrorCode::kConfig, "sampling parameters out of range");
    }
  }
};

struct AgentRequest {
  AgentRole role = AgentRole::kGenerate;
  SemType target;
  std::optional<std::string> sentence;
  std::optional<std::string> hint;
  int attempt = 0;
  std::uint64_t seed = 0;  // per-sentence; only the mock uses it
  SamplingParams sampling;

  void Validate() const {
    if (role == AgentRole::kCheck && !sentence) {
      throw Error(ErrorCode::kValidation, "check request without sentence");
    }
    if (role == AgentRole::kExtract && !sentence) {
      throw Error(ErrorCode::kValidation, "extract request without sentence");
    }
  }
};

struct CheckVerdict {
  bool approved = false;
  std::string hint;  // empty iff approved
};

class AgentBackend {
 public:
  virtual ~AgentBackend() = default;
  virtual std::string Generate(const AgentRequest& request) = 0;
  virtual CheckVerdict Check(const AgentRequest& request) = 0;
  virtual SemType Extract(const AgentRequest& request) = 0;
};

// Deterministic check: the sentence must have exactly the target type.
// The hint names the first offending entity in canonical order.
inline CheckVerdict CheckSentence(std::string_view sentence,
                                  const SemType& target,
                                  const OntologyTree& tree) {
  const SemType found = ExtractType(sentence, tree);
  if (found == target) return {true, ""};
  for (EntityId id : tree.canonical_order()) {
    const Entity& e = tree.entity(id);
    const std::uint32_t want = target.count(id);
    const std::uint32_t got = found.count(id);
    if (got > want) {
      return {false, "\"" + e.canonical_surface() +
                         "\" should not be in the sentence; it is an element "
                         "of the " + e.path.concept_name() + " category."};
    }
    if (got < want) {
      return {false, "\"" + e.canonical_surface() +
                         "\" is missing; the sentence must mention it" +
                         (want > 1 ? " " + std::to_string(want) + " times."
                                   : ".")};
    }
  }
  throw Error(ErrorCode::kInternal, "types differ but no entity differs");
}

struct GenerationResult {
  std::string sentence;
  int iterations = 0;  // regenerations before approval
  std::vector<std::string> hints;
};

// Generate, check, and regenerate with the checker's hint until approved.
inline GenerationResult GenerateStego(const SemType& target,
                                      const FeedbackConfig& cfg,
                                      AgentBackend& agents,
                                      std::uint64_t seed = 0) {
  cfg.Validate();
  GenerationResult result;
  AgentRequest request;
  request.target = target;
  request.seed = seed;
  request.sampling = cfg.sampling;
  for (int attempt = 0; attempt <= cfg.max_iterations; ++attempt) {
    // On regeneration the request still holds the rejected sentence.
    request.role = AgentRole::kGenerate;
    request.attempt = attempt;
    std::string sentence = agents.Generate(request);

    request.role = AgentRole::kCheck;
    request.sentence = sentence;
    CheckVerdict verdict = agents.Check(request);
    if (verdict.approved) {
      result.sentence = std::move(sentence);
      result.iterations = attempt;
      return result;
    }
    if (verdict.hint.empty()) {
      verdict.hint = "the sentence does not match the requested keywords";
    }
    result.hints.push_back(verdict.hint);
    request.hint = std::move(verdict.hint);
  }
  throw Error(ErrorCode::kGenerationFailed,
              "no approved sentence after " +
                  std::to_string(cfg.max_iterations) +
                  " regenerations; last hint: " + result.hints.back());
}

enum class FaultKind { kExtraEntity, kMissingEntity, kTypo };

struct MockConfig {
  double fault_rate = 0.0;
  // Faults are only injected on attempts below this, so the loop converges.
  int fault_horizon = 3;
  std::vector<FaultKind> fault_kinds = {FaultKind::kExtraEntity};
};

namespace mock {

struct TemplateBank {
  std::map<std::string, std::vector<std::string>, std::less<>> by_concept;
  std::vector<std::string> generic;
  std::vector<std::string> fillers;  // entity-free
  std::vector<std::string> connectors;
};

// Clause templates; "{}" marks the entity slot. Each clause alone is a
// sentence of about 16 tokens.
inline const TemplateBank& DefaultTemplates() {
  static const TemplateBank bank{
      {
          {"Location",
           {"my cousin still talks about the long afternoon she spent "
            "wandering around {} with her old camera",
            "we kept hearing stories about {} from the friendly couple who "
            "ran the small guesthouse next door",
            "the photographs from {} ended up covering an entire wall of the "
            "narrow hallway upstairs",
            "nobody in our group expected the short trip to {} to change "
            "their plans quite so much"}},
          {"Person",
           {"a long letter from {} arrived on a rainy afternoon and was read "
            "aloud twice at dinner",
            "everyone agreed that {} had given the most thoughtful answer "
            "during the crowded meeting",
            "the old notebook mentioned {} on almost every page, usually next "
            "to a small pencil sketch",
            "after the talk ended, {} stayed behind to answer questions from "
            "the curious people in the front row"}},
          {"Time",
           {"the little garden behind the house changed completely during {}, "
            "according to the neighbors across the road",
            "grandmother always said that {} was the right moment to repaint "
            "the blue kitchen cupboards",
            "the town band practiced every evening through {} and the music "
            "drifted across the quiet river",
            "the old clock in the hall kept perfect rhythm through {} without "
            "anyone ever winding it"}},
          {"Food",
           {"the small place on the corner served {} on chipped plates, and "
            "nobody ever complained about it",
            "she packed {} into a paper bag before catching the early train "
            "along the coast",
            "the handwritten card for {} was stained and folded, but the "
            "writing was still easy to read",
            "my uncle insisted that {} tasted better when shared with "
            "strangers at a long wooden table"}},
          {"Animal",
           {"the {} wandered into the frame just as the photographer was "
            "about to take the final picture",
            "the film spent nearly ten minutes following the {} through the "
            "tall grass near the river",
            "the volunteers laughed when the {} refused to leave the warm "
            "windowsill in the back office",
            "a small crowd gathered quietly to watch the {} until the light "
            "faded behind the hills"}},
      },
      {"the article mentioned {} in a short paragraph near the end of the "
       "second page of the newsletter",
       "somebody wrote {} on the whiteboard, and the word stayed there for the "
       "rest of the long meeting"},
      {"the kettle whistled softly while the rain kept tapping against the "
       "old window of the flat",
       "nobody could remember where the spare keys had been hidden after the "
       "last big cleanup",
       "the bus was late again, so we waited under the shelter and talked "
       "about nothing in particular",
       "a pile of unopened letters sat on the desk beside a cold cup and a "
       "broken pencil"},
      {", and ", "; meanwhile, ", ", while "},
  };
  return bank;
}

// Surfaces of `id` that extract to exactly {id: 1}.
inline std::vector<std::string> SafeSurfaces(const OntologyTree& tree,
                                             EntityId id) {
  std::vector<std::string> out;
  for (const std::string& s : tree.entity(id).surface_forms) {
    if (ExtractType(s, tree) == SemType{{id, 1}}) out.push_back(s);
  }
  if (out.empty()) out.push_back(tree.entity(id).canonical_surface());
  return out;
}

inline std::string Fill(std::string_view tmpl, std::string_view surface) {
  std::string out(tmpl);
  const std::size_t slot = out.find("{}");
  if (slot != std::string::npos) out.replace(slot, 2, surface);
  return out;
}

// Drops one interior letter of the longest word of `surface`.
inline std::string Typo(std::string surface, SeededRng& rng) {
  std::size_t best_begin = 0;
  std::size_t best_len = 0;
  std::size_t i = 0;
  while (i < surface.size()) {
    std::size_t j = i;
    while (j < surface.size() &&
           std::isalpha(static_cast<unsigned char>(surface[j]))) {
      ++j;
    }
    if (j - i > best_len) {
      best_begin = i;
      best_len = j - i;
    }
    i = j + 1;
  }
  if (best_len < 3) return surface + surface.substr(0, 1);
  const std::size_t pos = best_begin + 1 + rng.UniformIndex(best_len - 2);
  surface.erase(pos, 1);
  return surface;
}

}  // namespace mock

// Offline agents. Generation fills concept-keyed templates; check and
// extraction use the gazetteer. Output depends only on (seed, target,
// attempt).
class MockAgents : public AgentBackend {
 public:
  explicit MockAgents(const OntologyTree& tree, MockConfig config = {},
                      const mock::TemplateBank& bank = mock::DefaultTemplates())
      : tree_(tree), config_(std::move(config)), bank_(bank) {
    for (EntityId id : tree_.canonical_order()) {
      safe_surfaces_.emplace(id, mock::SafeSurfaces(tree_, id));
    }
    if (!(config_.fault_rate >= 0 && config_.fault_rate <= 1)) {
      throw Error(ErrorCode::kConfig, "mock fault_rate must be in [0, 1]");
    }
    if (bank_.fillers.empty() || bank_.generic.empty() ||
        bank_.connectors.empty()) {
      throw Error(ErrorCode::kConfig, "template bank is incomplete");
    }
  }

  std::string Generate(const AgentRequest& request) override {
    request.Validate();
    SeededRng rng(MixSeed({request.seed, TypeSeed(request.target),
                           static_cast<std::uint64_t>(request.attempt)}));
    std::vector<EntityId> slots = CanonicalSequence(request.target, tree_);
    // Shuffle so multi-entity sentences vary in order.
    for (std::size_t i = slots.size(); i > 1; --i) {
      std::swap(slots[i - 1], slots[rng.UniformIndex(i)]);
    }
    std::vector<std::string> clauses;
    std::vector<std::string> surfaces;
    for (EntityId id : slots) {
      surfaces.push_back(Surface(id, rng));
      clauses.push_back(Clause(id, surfaces.back(), rng));
    }
    if (clauses.empty()) clauses.push_back(Pick(bank_.fillers, rng));

    const bool fault = request.attempt < config_.fault_horizon &&
                       !config_.fault_kinds.empty() &&
                       rng.Uniform01() < config_.fault_rate;
    if (fault) {
      const FaultKind kind =
          config_.fault_kinds[rng.UniformIndex(config_.fault_kinds.size())];
      InjectFault(kind, request.target, surfaces, clauses, rng);
    }

    std::string sentence = clauses[0];
    for (std::size_t i = 1; i < clauses.size(); ++i) {
      sentence += Pick(bank_.connectors, rng);
      sentence += clauses[i];
    }
    sentence += ".";
    if (!sentence.empty() && std::islower(static_cast<unsigned char>(sentence[0]))) {
      sentence[0] = static_cast<char>(
          std::toupper(static_cast<unsigned char>(sentence[0])));
    }
    return sentence;
  }

  CheckVerdict Check(const AgentRequest& request) override {
    request.Validate();
    return CheckSentence(*request.sentence, request.target, tree_);
  }

  SemType Extract(const AgentRequest& request) override {
    request.Validate();
    return ExtractType(*request.sentence, tree_);
  }

 private:
  static std::uint64_t TypeSeed(const SemType& t) {
    std::uint64_t h = 14695981039346656037ull;
    for (const auto& [id, n] : t.counts()) {
      h = MixSeed({h, id.value, n});
    }
    return h;
  }

  static const std::string& Pick(const std::vector<std::string>& v,
                                 SeededRng& rng) {
    return v[rng.UniformIndex(v.size())];
  }

  std::string Surface(EntityId id, SeededRng& rng) const {
    const auto& surfaces = safe_surfaces_.at(id);
    return surfaces[rng.UniformIndex(surfaces.size())];
  }

  std::string Clause(EntityId id, const std::string& surface,
                     SeededRng& rng) const {
    const std::string& concept_name = tree_.entity(id).path.concept_name();
    auto it = bank_.by_concept.find(concept_name);
    const auto& templates =
        it == bank_.by_concept.end() || it->second.empty() ? bank_.generic
                                                           : it->second;
    return mock::Fill(Pick(templates, rng), surface);
  }

  void InjectFault(FaultKind kind, const SemType& target,
                   const std::vector<std::string>& surfaces,
                   std::vector<std::string>& clauses, SeededRng& rng) const {
    if (surfaces.empty() && kind != FaultKind::kExtraEntity) {
      kind = FaultKind::kExtraEntity;
    }
    switch (kind) {
      case FaultKind::kExtraEntity: {
        std::vector<EntityId> others;
        for (EntityId id : tree_.canonical_order()) {
          if (target.count(id) == 0) others.push_back(id);
        }
        if (others.empty()) {
          others.assign(tree_.canonical_order().begin(),
                        tree_.canonical_order().end());
        }
        const EntityId stray = others[rng.UniformIndex(others.size())];
        clauses.push_back(Clause(stray, Surface(stray, rng), rng));
        break;
      }
      case FaultKind::kMissingEntity: {
        const std::size_t k = rng.UniformIndex(clauses.size());
        clauses[k] = Pick(bank_.fillers, rng);
        break;
      }
      case FaultKind::kTypo: {
        const std::size_t k = rng.UniformIndex(surfaces.size());
        const std::string& surface = surfaces[k];
        const std::string broken = mock::Typo(surface, rng);
        std::string& clause = clauses[k];
        const std::size_t at = clause.find(surface);
        if (at != std::string::npos) clause.replace(at, surface.size(), broken);
        break;
      }
    }
  }

  const OntologyTree& tree_;
  MockConfig config_;
  const mock::TemplateBank& bank_;
  std::map<EntityId, std::vector<std::string>> safe_surfaces_;
};

}  // namespace semsteg

#endif  // SEMSTEG_AGENTS_H_
