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

// Agents backed by a chat model.

#ifndef SEMSTEG_LIVE_AGENTS_H_
#define SEMSTEG_LIVE_AGENTS_H_

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsteg/agents.h"
#include "semsteg/chat_client.h"
#include "semsteg/semantic_space.h"

namespace semsteg {

namespace prompts {

inline std::string KeywordList(const SemType& target, const OntologyTree& tree) {
  std::string out;
  for (EntityId id : tree.canonical_order()) {
    const std::uint32_t n = target.count(id);
    if (n == 0) continue;
    if (!out.empty()) out += ", ";
    out += tree.entity(id).canonical_surface();
    if (n > 1) out += " (" + std::to_string(n) + " times)";
  }
  return out;
}

inline std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// One constraint sentence per entity, naming its full path.
inline std::string Constraints(const SemType& target, const OntologyTree& tree) {
  std::string out;
  for (EntityId id : tree.canonical_order()) {
    if (target.count(id) == 0) continue;
    const Entity& e = tree.entity(id);
    const std::string concept_name = e.path.concept_name();
    out += " " + e.canonical_surface() + " is an element of the " +
           concept_name + " category (" + e.path.str() + "), and no other " +
           Lower(concept_name) + "-like element should appear in the sentence.";
  }
  return out;
}

inline std::string ConceptNames(const OntologyTree& tree) {
  std::string out;
  for (int child : tree.nodes()[OntologyTree::kRoot].children) {
    if (!out.empty()) out += ", ";
    out += tree.nodes()[child].name;
  }
  return out;
}

inline std::string Generate(const SemType& target, const OntologyTree& tree) {
  if (target.empty()) {
    return "Write one natural sentence that contains no element of any of "
           "these categories: " + ConceptNames(tree) +
           ". Reply with the sentence only.";
  }
  return "Write one sentence that uses these keywords: " +
         KeywordList(target, tree) + "." + Constraints(target, tree) +
         " Reply with the sentence only.";
}

inline std::string Regenerate(const std::string& hint) {
  return "Feedback: " + hint +
         " Rewrite the sentence so that it follows every constraint. Reply "
         "with the sentence only.";
}

inline constexpr std::string_view kApproved = "APPROVED";

inline std::string Check(const std::string& sentence, const SemType& target,
                         const OntologyTree& tree) {
  std::string required = target.empty() ? "none" : KeywordList(target, tree);
  return "You check sentences against keyword constraints. Categories: " +
         ConceptNames(tree) + ". Required keywords: " + required + "." +
         Constraints(target, tree) +
         " The sentence must contain each required keyword the stated number "
         "of times and no other element of these categories.\nSentence: " +
         sentence + "\nIf the sentence complies, reply exactly " +
         std::string(kApproved) +
         ". Otherwise reply with one line naming the offending word and its "
         "category.";
}

inline std::string Extract(const std::string& sentence,
                           const OntologyTree& tree) {
  std::string out =
      "Known entities, one per line as path followed by surface forms:\n";
  for (EntityId id : tree.canonical_order()) {
    const Entity& e = tree.entity(id);
    out += e.path.str() + " |";
    for (const std::string& s : e.surface_forms) out += " " + s + ";";
    out += "\n";
  }
  out += "Sentence: " + sentence +
         "\nList every known entity that occurs in the sentence, one per line, "
         "formatted exactly as `path: count`. If none occurs, reply NONE. "
         "Reply with nothing else.";
  return out;
}

}  // namespace prompts

// Strict "path: count" lines, or NONE. Returns nullopt when malformed.
inline std::optional<SemType> ParseExtractionReply(std::string_view reply,
                                                   const OntologyTree& tree) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.remove_suffix(1);
    }
    return s;
  };
  std::vector<std::string_view> lines;
  while (!reply.empty()) {
    const std::size_t nl = reply.find('\n');
    std::string_view line = trim(reply.substr(0, nl));
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    reply.remove_prefix(nl + 1);
  }
  if (lines.size() == 1 && lines[0] == "NONE") return SemType{};
  if (lines.empty()) return std::nullopt;
  SemType out;
  for (std::string_view line : lines) {
    const std::size_t colon = line.rfind(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto id = tree.FindByPath(trim(line.substr(0, colon)));
    const std::string_view digits = trim(line.substr(colon + 1));
    std::uint32_t n = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (!id || ec != std::errc() || ptr != digits.data() + digits.size() ||
        n == 0 || out.count(*id) != 0) {
      return std::nullopt;
    }
    out.Add(*id, n);
  }
  return out;
}

class LiveAgents : public AgentBackend {
 public:
  LiveAgents(const OntologyTree& tree, ChatClient& client)
      : tree_(tree), client_(client) {}

  std::string Generate(const AgentRequest& request) override {
    request.Validate();
    std::vector<ChatMessage> messages = {
        {"user", prompts::Generate(request.target, tree_)}};
    if (request.attempt > 0 && request.sentence && request.hint) {
      messages.push_back({"assistant", *request.sentence});
      messages.push_back({"user", prompts::Regenerate(*request.hint)});
    }
    return FirstLine(client_.Complete(messages, request.sampling));
  }

  CheckVerdict Check(const AgentRequest& request) override {
    request.Validate();
    const std::string reply = FirstLine(client_.Complete(
        {{"user", prompts::Check(*request.sentence, request.target, tree_)}},
        request.sampling));
    if (reply.rfind(prompts::kApproved, 0) == 0) return {true, ""};
    return {false, reply.empty() ? "the checker gave no reason" : reply};
  }

  SemType Extract(const AgentRequest& request) override {
    request.Validate();
    std::vector<ChatMessage> messages = {
        {"user", prompts::Extract(*request.sentence, tree_)}};
    std::string reply = client_.Complete(messages, request.sampling);
    if (auto t = ParseExtractionReply(reply, tree_)) return *t;
    messages.push_back({"assistant", reply});
    messages.push_back(
        {"user",
         "That reply could not be parsed. Use only `path: count` lines with "
         "paths from the list, or the single word NONE."});
    reply = client_.Complete(messages, request.sampling);
    if (auto t = ParseExtractionReply(reply, tree_)) return *t;
    throw Error(ErrorCode::kExtractionFailed,
                "extraction reply malformed after one retry");
  }

 private:
  static std::string FirstLine(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find('\n', begin);
    std::string line = text.substr(begin, end == std::string::npos
                                              ? std::string::npos
                                              : end - begin);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.pop_back();
    }
    return line;
  }

  const OntologyTree& tree_;
  ChatClient& client_;
};

}  // namespace semsteg

#endif  // SEMSTEG_LIVE_AGENTS_H_
