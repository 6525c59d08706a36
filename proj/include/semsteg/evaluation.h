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

// Ground-truth traces and the robustness/capacity report built from them.

#ifndef SEMSTEG_EVALUATION_H_
#define SEMSTEG_EVALUATION_H_

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "semsteg/agents.h"
#include "semsteg/attacks.h"
#include "semsteg/codec.h"
#include "semsteg/dist_io.h"
#include "semsteg/json_util.h"
#include "semsteg/metrics.h"
#include "semsteg/pipeline.h"

namespace semsteg {

// Per-sentence ground truth written next to an encoded stego file. The
// embedded bits are the sampled (masked) stream, so no key is needed to
// score a run and nothing about the key or plaintext is revealed.
struct TraceFile {
  std::uint64_t seed = 0;
  std::size_t framed_bits = 0;
  std::vector<SentenceRecord> sentences;
};

inline std::string SerializeTrace(const TraceFile& trace,
                                  const OntologyTree& tree) {
  using json_util::Json;
  Json sentences = Json::array();
  for (const SentenceRecord& r : trace.sentences) {
    sentences.push_back({{"type", TypeToJson(r.type, tree)},
                         {"bits_embedded", r.bits_embedded},
                         {"embedded", r.embedded.ToString()},
                         {"iterations", r.iterations},
                         {"hints", r.hints}});
  }
  Json doc = {{"version", 1},
              {"seed", trace.seed},
              {"framed_bits", trace.framed_bits},
              {"sentences", std::move(sentences)}};
  return doc.dump(1) + "\n";
}

inline TraceFile ParseTrace(std::string_view text, const OntologyTree& tree,
                            const std::string& source = "<trace>") {
  using json_util::Field;
  using json_util::Json;
  const Json doc = json_util::Parse(text, source);
  json_util::CheckVersion(doc, source);
  TraceFile trace;
  trace.seed = Field<std::uint64_t>(doc, "seed", source);
  trace.framed_bits = Field<std::size_t>(doc, "framed_bits", source);
  const Json sentences = Field<Json>(doc, "sentences", source);
  if (!sentences.is_array()) {
    throw Error(ErrorCode::kParse, source + ": 'sentences' must be an array");
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::string where = source + ": sentences[" + std::to_string(i) + "]";
    SentenceRecord r;
    r.type = TypeFromJson(Field<Json>(sentences[i], "type", where), tree, where);
    r.bits_embedded = Field<std::size_t>(sentences[i], "bits_embedded", where);
    r.embedded =
        BitStream::FromString(Field<std::string>(sentences[i], "embedded", where));
    if (r.embedded.size() != r.bits_embedded) {
      throw Error(ErrorCode::kParse, where + ": embedded bits disagree with count");
    }
    r.iterations = Field<int>(sentences[i], "iterations", where);
    if (sentences[i].contains("hints")) {
      r.hints = Field<std::vector<std::string>>(sentences[i], "hints", where);
    }
    trace.sentences.push_back(std::move(r));
  }
  return trace;
}

struct EvalOptions {
  int attack_count = 1;
  std::uint64_t attack_seed = 0;
  bool protect_entities = false;
};

struct EvalReport {
  std::size_t sentences = 0;
  std::uint64_t session_seed = 0;
  EvalOptions options;
  EmbeddingRate rate;
  double first_attempt_approval = 0;
  std::map<int, std::size_t> iterations;
  int max_iterations_seen = 0;
  double distinct1 = 0;
  double distinct2 = 0;
  // "none" plus one entry per attack kind.
  std::map<std::string, SuccessTable> dsr;
};

// Whether `sentence` still decodes to exactly the embedded bits.
inline bool DecodesTo(const std::string& sentence, const BitStream& embedded,
                      std::uint64_t index, const ClassDistribution& dist,
                      const OntologyTree& tree, AgentBackend& agents,
                      const SamplingParams& sampling) {
  AgentRequest request;
  request.role = AgentRole::kExtract;
  request.sentence = sentence;
  request.seed = index;
  request.sampling = sampling;
  const SemType t = agents.Extract(request);
  try {
    return DecodeType(t, dist, tree) == embedded;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnknownClass) return false;
    throw;
  }
}

inline EvalReport Evaluate(const TraceFile& trace,
                           const std::vector<std::string>& sentences,
                           const OntologyTree& tree,
                           const ClassDistribution& dist, AgentBackend& agents,
                           const EvalOptions& options,
                           const SamplingParams& sampling = {}) {
  if (trace.sentences.size() != sentences.size()) {
    throw Error(ErrorCode::kValidation,
                "trace has " + std::to_string(trace.sentences.size()) +
                    " sentences, stego has " + std::to_string(sentences.size()));
  }
  if (sentences.empty()) throw Error(ErrorCode::kValidation, "empty run");
  EvalReport report;
  report.sentences = sentences.size();
  report.session_seed = trace.seed;
  report.options = options;

  std::vector<std::size_t> bits;
  std::vector<int> iterations;
  for (const SentenceRecord& r : trace.sentences) {
    bits.push_back(r.bits_embedded);
    iterations.push_back(r.iterations);
    report.max_iterations_seen = std::max(report.max_iterations_seen, r.iterations);
  }
  report.rate = ComputeEmbeddingRate(bits, sentences);
  report.iterations = IterationHistogram(iterations);
  report.first_attempt_approval =
      static_cast<double>(report.iterations[0]) /
      static_cast<double>(sentences.size());
  report.distinct1 = DistinctN(sentences, 1);
  try {
    report.distinct2 = DistinctN(sentences, 2);
  } catch (const Error&) {
    report.distinct2 = 0;
  }

  SuccessTable& clean = report.dsr["none"];
  for (std::size_t j = 0; j < sentences.size(); ++j) {
    const SentenceRecord& r = trace.sentences[j];
    clean.Add(TypeLen(r.type), DecodesTo(sentences[j], r.embedded, j, dist,
                                         tree, agents, sampling));
  }
  for (AttackKind kind : kAllAttackKinds) {
    SuccessTable& table = report.dsr[std::string(AttackKindName(kind))];
    const AttackSpec spec{kind, options.attack_count, options.attack_seed,
                          options.protect_entities};
    for (std::size_t j = 0; j < sentences.size(); ++j) {
      const SentenceRecord& r = trace.sentences[j];
      const AttackResult attacked = Attack(sentences[j], spec, &tree, j);
      table.Add(TypeLen(r.type), DecodesTo(attacked.sentence, r.embedded, j,
                                           dist, tree, agents, sampling));
    }
  }
  return report;
}

inline json_util::Json ReportToJson(const EvalReport& r) {
  using json_util::Json;
  Json dsr = Json::object();
  for (const auto& [name, table] : r.dsr) {
    Json by_len = Json::object();
    for (const auto& [len, b] : table.buckets()) {
      by_len[std::to_string(len)] = {
          {"total", b.total}, {"success", b.success}, {"rate", b.rate()}};
    }
    const RateBucket all = table.Overall();
    dsr[name] = {{"overall", {{"total", all.total},
                              {"success", all.success},
                              {"rate", all.rate()}}},
                 {"by_type_len", std::move(by_len)}};
  }
  Json hist = Json::object();
  for (const auto& [k, v] : r.iterations) hist[std::to_string(k)] = v;
  return Json{
      {"version", 1},
      {"sentences", r.sentences},
      {"seeds", {{"session", r.session_seed}, {"attack", r.options.attack_seed}}},
      {"attack", {{"count", r.options.attack_count},
                  {"protect_entities", r.options.protect_entities}}},
      {"embedding_rate", {{"bits_per_sentence", r.rate.bits_per_sentence},
                          {"bits_per_token", r.rate.bits_per_token}}},
      {"mission_success_rate", r.first_attempt_approval},
      {"iteration_histogram", std::move(hist)},
      {"max_iterations_seen", r.max_iterations_seen},
      {"distinct_1", r.distinct1},
      {"distinct_2", r.distinct2},
      {"decoding_success_rate", std::move(dsr)},
  };
}

inline std::string FormatIterationHistogram(const std::map<int, std::size_t>& h) {
  std::size_t total = 0;
  for (const auto& [k, v] : h) total += v;
  std::string out = "iterations  count  share\n";
  char line[96];
  for (const auto& [k, v] : h) {
    std::snprintf(line, sizeof line, "%10d  %5zu  %6.2f%%\n", k, v,
                  total ? 100.0 * static_cast<double>(v) / static_cast<double>(total)
                        : 0.0);
    out += line;
  }
  return out;
}

inline std::string ReportToTable(const EvalReport& r) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line,
                "sentences %zu   session seed %llu   attack seed %llu   "
                "perturbations %d%s\n",
                r.sentences, static_cast<unsigned long long>(r.session_seed),
                static_cast<unsigned long long>(r.options.attack_seed),
                r.options.attack_count,
                r.options.protect_entities ? " (entities protected)" : "");
  out += line;
  std::snprintf(line, sizeof line,
                "embedding rate  %.4f bits/sentence  %.4f bits/token\n",
                r.rate.bits_per_sentence, r.rate.bits_per_token);
  out += line;
  std::snprintf(line, sizeof line,
                "mission success rate (first attempt)  %.4f\n"
                "distinct-1 %.4f  distinct-2 %.4f\n\n",
                r.first_attempt_approval, r.distinct1, r.distinct2);
  out += line;
  out += FormatIterationHistogram(r.iterations);
  out += "\ndecoding success rate\n|T|     none     insert   delete   replace  swap\n";
  std::set<std::uint64_t> lens;
  for (const auto& [name, table] : r.dsr) {
    for (const auto& [len, b] : table.buckets()) lens.insert(len);
  }
  auto row = [&](const std::string& label, auto&& get) {
    std::snprintf(line, sizeof line, "%-8s", label.c_str());
    out += line;
    for (const char* name : {"none", "insert", "delete", "replace", "swap"}) {
      const RateBucket b = get(r.dsr.at(name));
      if (b.total == 0) {
        out += "-        ";
      } else {
        std::snprintf(line, sizeof line, "%-9.3f", b.rate());
        out += line;
      }
    }
    while (out.back() == ' ') out.pop_back();
    out += "\n";
  };
  for (std::uint64_t len : lens) {
    row(std::to_string(len), [&](const SuccessTable& t) {
      auto it = t.buckets().find(len);
      return it == t.buckets().end() ? RateBucket{} : it->second;
    });
  }
  row("all", [](const SuccessTable& t) { return t.Overall(); });
  return out;
}

}  // namespace semsteg

#endif  // SEMSTEG_EVALUATION_H_
