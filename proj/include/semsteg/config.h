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

// Run configuration: one JSON document, overridable from the command line.

#ifndef SEMSTEG_CONFIG_H_
#define SEMSTEG_CONFIG_H_

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include "semsteg/agents.h"
#include "semsteg/attacks.h"
#include "semsteg/chat_client.h"
#include "semsteg/crypto.h"
#include "semsteg/json_util.h"

namespace semsteg {

enum class AgentMode { kMock, kLive };

inline AgentMode ParseAgentMode(std::string_view s) {
  if (s == "mock") return AgentMode::kMock;
  if (s == "live") return AgentMode::kLive;
  throw Error(ErrorCode::kConfig, "mode must be 'mock' or 'live'");
}

struct Config {
  std::string tree_path;
  std::string distribution_path;
  AgentMode mode = AgentMode::kMock;
  std::uint64_t seed = 0;
  int workers = 1;

  // Secrets are referenced, never stored in this struct's serialized form.
  std::optional<std::string> key_hex;
  std::string key_env = "SEMSTEG_KEY";
  std::optional<std::string> nonce_hex;
  std::string nonce_env = "SEMSTEG_NONCE";

  ChatConfig live;
  FeedbackConfig feedback;
  MockConfig mock;
  AttackSpec attack;

  void Validate() const {
    feedback.Validate();
    attack.Validate();
    if (workers < 1 || workers > 64) {
      throw Error(ErrorCode::kConfig, "workers must be in [1, 64]");
    }
    if (mode == AgentMode::kLive) live.Validate();
  }
};

namespace internal {

inline void RejectUnknownKeys(const json_util::Json& obj,
                              const std::set<std::string>& allowed,
                              const std::string& where) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kConfig, where + " must be an object");
  }
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.contains(k)) {
      throw Error(ErrorCode::kConfig, where + ": unknown key '" + k + "'");
    }
  }
}

template <typename T>
void Read(const json_util::Json& obj, const char* key, T& out,
          const std::string& where) {
  if (obj.contains(key)) out = json_util::Field<T>(obj, key, where);
}

}  // namespace internal

// Relative file paths resolve against the config file's directory.
inline Config ParseConfig(std::string_view text, const std::string& source,
                          const std::filesystem::path& base_dir) {
  using internal::Read;
  using json_util::Json;
  Config c;
  try {
    const Json doc = json_util::Parse(text, source);
    internal::RejectUnknownKeys(
        doc,
        {"version", "tree", "distribution", "mode", "seed", "workers",
         "key_hex", "key_env", "nonce_hex", "nonce_env", "live", "feedback",
         "mock", "attack"},
        source);
    json_util::CheckVersion(doc, source);
    auto resolve = [&](const std::string& p) {
      const std::filesystem::path path(p);
      return (path.is_absolute() ? path : base_dir / path).lexically_normal().string();
    };
    if (doc.contains("tree")) {
      c.tree_path = resolve(json_util::Field<std::string>(doc, "tree", source));
    }
    if (doc.contains("distribution")) {
      c.distribution_path =
          resolve(json_util::Field<std::string>(doc, "distribution", source));
    }
    if (doc.contains("mode")) {
      c.mode = ParseAgentMode(json_util::Field<std::string>(doc, "mode", source));
    }
    Read(doc, "seed", c.seed, source);
    Read(doc, "workers", c.workers, source);
    if (doc.contains("key_hex")) {
      c.key_hex = json_util::Field<std::string>(doc, "key_hex", source);
    }
    Read(doc, "key_env", c.key_env, source);
    if (doc.contains("nonce_hex")) {
      c.nonce_hex = json_util::Field<std::string>(doc, "nonce_hex", source);
    }
    Read(doc, "nonce_env", c.nonce_env, source);

    if (doc.contains("live")) {
      const Json& j = doc["live"];
      const std::string where = source + ": live";
      internal::RejectUnknownKeys(
          j,
          {"endpoint_url", "model_name", "api_key_env", "timeout_ms",
           "max_retries", "initial_backoff_ms", "max_in_flight"},
          where);
      Read(j, "endpoint_url", c.live.endpoint_url, where);
      Read(j, "model_name", c.live.model_name, where);
      Read(j, "api_key_env", c.live.api_key_env, where);
      Read(j, "timeout_ms", c.live.timeout_ms, where);
      Read(j, "max_retries", c.live.max_retries, where);
      Read(j, "initial_backoff_ms", c.live.initial_backoff_ms, where);
      Read(j, "max_in_flight", c.live.max_in_flight, where);
    }
    if (doc.contains("feedback")) {
      const Json& j = doc["feedback"];
      const std::string where = source + ": feedback";
      internal::RejectUnknownKeys(j, {"max_iterations", "temperature", "top_p"},
                                  where);
      Read(j, "max_iterations", c.feedback.max_iterations, where);
      Read(j, "temperature", c.feedback.sampling.temperature, where);
      Read(j, "top_p", c.feedback.sampling.top_p, where);
    }
    if (doc.contains("mock")) {
      const Json& j = doc["mock"];
      const std::string where = source + ": mock";
      internal::RejectUnknownKeys(j, {"fault_rate", "fault_horizon"}, where);
      Read(j, "fault_rate", c.mock.fault_rate, where);
      Read(j, "fault_horizon", c.mock.fault_horizon, where);
    }
    if (doc.contains("attack")) {
      const Json& j = doc["attack"];
      const std::string where = source + ": attack";
      internal::RejectUnknownKeys(
          j, {"kind", "count", "seed", "protect_entities"}, where);
      if (j.contains("kind")) {
        c.attack.kind = ParseAttackKind(json_util::Field<std::string>(j, "kind", where));
      }
      Read(j, "count", c.attack.count, where);
      Read(j, "seed", c.attack.seed, where);
      Read(j, "protect_entities", c.attack.protect_entities, where);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw Error(ErrorCode::kConfig, e.detail());
    throw;
  }
  return c;
}

inline Config LoadConfig(const std::string& path) {
  return ParseConfig(json_util::ReadFile(path), path,
                     std::filesystem::path(path).parent_path());
}

inline std::optional<std::string> GetEnv(const std::string& name) {
  if (name.empty()) return std::nullopt;
  const char* v = std::getenv(name.c_str());
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

inline std::vector<std::uint8_t> ResolveKey(const Config& c) {
  if (c.key_hex) return HexDecode(*c.key_hex, "key_hex");
  if (auto v = GetEnv(c.key_env)) return HexDecode(*v, c.key_env.c_str());
  throw Error(ErrorCode::kConfig, "no key: set key_hex in the config or the " +
                                      c.key_env + " environment variable");
}

// Configured nonce, if any; otherwise the caller derives one per message.
inline std::optional<std::vector<std::uint8_t>> ResolveNonce(const Config& c) {
  if (c.nonce_hex) return HexDecode(*c.nonce_hex, "nonce_hex");
  if (auto v = GetEnv(c.nonce_env)) return HexDecode(*v, c.nonce_env.c_str());
  return std::nullopt;
}

}  // namespace semsteg

#endif  // SEMSTEG_CONFIG_H_
