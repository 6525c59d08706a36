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

// semsteg: hide bytes in ordinary-looking sentences and get them back.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semsteg/agents.h"
#include "semsteg/attacks.h"
#include "semsteg/chat_client.h"
#include "semsteg/config.h"
#include "semsteg/dist_io.h"
#include "semsteg/evaluation.h"
#include "semsteg/live_agents.h"
#include "semsteg/pipeline.h"
#include "semsteg/tree_io.h"

namespace semsteg {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoCapacity = 3;
constexpr int kExitAgent = 4;
constexpr int kExitCorrupt = 5;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoCapacity:
      return kExitNoCapacity;
    case ErrorCode::kAgentHttp:
    case ErrorCode::kAgentAuth:
    case ErrorCode::kAgentTimeout:
    case ErrorCode::kAgentTransport:
    case ErrorCode::kGenerationFailed:
    case ErrorCode::kExtractionFailed:
      return kExitAgent;
    case ErrorCode::kTruncatedMessage:
    case ErrorCode::kCorruptMessage:
    case ErrorCode::kDeadPrefix:
      return kExitCorrupt;
    case ErrorCode::kInternal:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

std::vector<std::uint8_t> ReadBytes(const std::string& path) {
  const std::string s = json_util::ReadFile(path);
  return {s.begin(), s.end()};
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> tree;
  std::optional<std::string> dist;
  std::optional<int> workers;
  bool verbose = false;
};

Config ResolveConfig(const Globals& g) {
  Config c;
  if (!g.config_path.empty()) c = LoadConfig(g.config_path);
  if (g.seed) c.seed = *g.seed;
  if (g.mode) c.mode = ParseAgentMode(*g.mode);
  if (g.tree) c.tree_path = *g.tree;
  if (g.dist) c.distribution_path = *g.dist;
  if (g.workers) c.workers = *g.workers;
  c.Validate();
  return c;
}

OntologyTree LoadConfiguredTree(const Config& c) {
  if (c.tree_path.empty()) {
    throw Error(ErrorCode::kConfig, "no tree: pass --tree or set 'tree'");
  }
  return LoadTree(c.tree_path);
}

ClassDistribution LoadConfiguredDistribution(const Config& c,
                                             const OntologyTree& tree) {
  if (c.distribution_path.empty()) {
    throw Error(ErrorCode::kConfig,
                "no distribution: pass --dist or set 'distribution'");
  }
  return LoadDistribution(c.distribution_path, tree);
}

// Agent backends for one command. Live mode checks for the api key before
// anything is sent.
class Agents {
 public:
  Agents(const Config& c, const OntologyTree& tree, bool verbose) {
    if (c.mode == AgentMode::kMock) {
      backend_ = std::make_unique<MockAgents>(tree, c.mock);
      return;
    }
    const auto key = GetEnv(c.live.api_key_env);
    if (!key) {
      throw Error(ErrorCode::kAgentAuth, "live mode needs the api key in $" +
                                             c.live.api_key_env);
    }
    LogSink log;
    if (verbose) log = [](std::string_view line) { std::cerr << line << "\n"; };
    client_ = std::make_unique<ChatClient>(
        c.live, *key, std::make_unique<HttplibTransport>(c.live.endpoint_url),
        std::make_shared<RetryClock>(), log);
    backend_ = std::make_unique<LiveAgents>(tree, *client_);
  }

  AgentBackend& backend() { return *backend_; }

 private:
  std::unique_ptr<ChatClient> client_;
  std::unique_ptr<AgentBackend> backend_;
};

int BuildDist(const Globals& g, const std::string& corpus_path,
              const std::string& out_path, std::uint32_t max_len) {
  const Config c = ResolveConfig(g);
  const OntologyTree tree = LoadConfiguredTree(c);
  const auto records =
      ExtractCorpus(json_util::ReadFile(corpus_path), tree, corpus_path);
  const ClassDistribution dist = BuildDistribution(records, tree, max_len);
  json_util::WriteFile(out_path, SerializeDistribution(dist, tree));
  std::printf("records %zu  kept %llu  support %zu  entropy %.4f bits\n",
              records.size(), static_cast<unsigned long long>(dist.total()),
              dist.support_size(), dist.Entropy());
  return kExitOk;
}

int Encode(const Globals& g, const std::string& message_path,
           const std::string& out_path, const std::string& trace_path) {
  const Config c = ResolveConfig(g);
  const OntologyTree tree = LoadConfiguredTree(c);
  const ClassDistribution dist = LoadConfiguredDistribution(c, tree);
  Agents agents(c, tree, g.verbose);
  const auto message = ReadBytes(message_path);
  StegoKey key{ResolveKey(c), {}};
  if (auto nonce = ResolveNonce(c)) {
    key.nonce = *nonce;
  } else {
    key.nonce = DeriveNonce(key.key, c.seed, message);
  }
  const Session session{tree, dist, key, c.feedback, agents.backend(), c.seed,
                        c.workers};
  const EncodeResult enc = EncodeMessage(message, session);
  json_util::WriteFile(out_path, SerializeStego(enc.message));
  if (!trace_path.empty()) {
    json_util::WriteFile(trace_path,
                         SerializeTrace({c.seed, enc.framed_bits, enc.records},
                                        tree));
  }
  std::size_t bits = 0;
  for (const auto& r : enc.records) bits += r.bits_embedded;
  std::printf("sentences %zu  framed bits %zu  bits/sentence %.4f\n",
              enc.records.size(), enc.framed_bits,
              static_cast<double>(bits) / static_cast<double>(enc.records.size()));
  return kExitOk;
}

int Decode(const Globals& g, const std::string& stego_path,
           const std::string& out_path) {
  const Config c = ResolveConfig(g);
  const OntologyTree tree = LoadConfiguredTree(c);
  const ClassDistribution dist = LoadConfiguredDistribution(c, tree);
  Agents agents(c, tree, g.verbose);
  const ParsedStego parsed =
      ParseStego(json_util::ReadFile(stego_path), stego_path);
  const StegoKey key{ResolveKey(c), parsed.message.nonce};
  const Session session{tree, dist, key, c.feedback, agents.backend(), c.seed,
                        c.workers};
  const DecodeReport report = DecodeMessage(parsed.message, session);

  std::size_t bits = 0;
  for (std::size_t j = 0; j < report.sentences.size(); ++j) {
    const SentenceDecode& d = report.sentences[j];
    bits += d.bits.size();
    if (d.status != SentenceStatus::kOk) {
      std::fprintf(stderr, "sentence %zu: %s (%s)\n", j,
                   std::string(SentenceStatusName(d.status)).c_str(),
                   d.detail.c_str());
    }
  }
  const std::size_t n = parsed.message.sentences.size();
  if (n != parsed.declared_sentences) {
    std::fprintf(stderr, "error: file declares %zu sentences, found %zu\n",
                 parsed.declared_sentences, n);
    return kExitCorrupt;
  }
  if (!report.ok()) {
    std::fprintf(stderr, "error: %s: %s\n",
                 std::string(ErrorCodeName(report.failure)).c_str(),
                 report.failure_detail.c_str());
    return kExitCorrupt;
  }
  const auto& m = *report.message;
  json_util::WriteFile(out_path,
                       std::string_view(reinterpret_cast<const char*>(m.data()),
                                        m.size()));
  std::printf("sentences %zu  bytes %zu  bits/sentence %.4f\n", n, m.size(),
              n ? static_cast<double>(bits) / static_cast<double>(n) : 0.0);
  return kExitOk;
}

int RunAttack(const Globals& g, const std::string& stego_path,
              const std::string& out_path, const AttackSpec& overrides,
              bool kind_set, bool count_set, bool seed_set, bool protect_set) {
  const Config c = ResolveConfig(g);
  AttackSpec spec = c.attack;
  if (kind_set) spec.kind = overrides.kind;
  if (count_set) spec.count = overrides.count;
  if (seed_set) spec.seed = overrides.seed;
  if (protect_set) spec.protect_entities = overrides.protect_entities;
  spec.Validate();
  std::optional<OntologyTree> tree;
  if (spec.protect_entities) tree = LoadConfiguredTree(c);
  ParsedStego parsed = ParseStego(json_util::ReadFile(stego_path), stego_path);
  std::size_t degenerate = 0;
  for (std::size_t j = 0; j < parsed.message.sentences.size(); ++j) {
    AttackResult r = Attack(parsed.message.sentences[j], spec,
                            tree ? &*tree : nullptr, j);
    if (r.degenerate) ++degenerate;
    parsed.message.sentences[j] = std::move(r.sentence);
  }
  json_util::WriteFile(out_path, SerializeStego(parsed.message));
  std::printf("attack %s  count %d  seed %llu  sentences %zu  degenerate %zu\n",
              std::string(AttackKindName(spec.kind)).c_str(), spec.count,
              static_cast<unsigned long long>(spec.seed),
              parsed.message.sentences.size(), degenerate);
  return kExitOk;
}

int Eval(const Globals& g, const std::string& run_dir, EvalOptions options,
         bool count_set, bool seed_set, bool protect_set) {
  const Config c = ResolveConfig(g);
  if (!count_set) options.attack_count = c.attack.count;
  if (!seed_set) options.attack_seed = c.attack.seed;
  if (!protect_set) options.protect_entities = c.attack.protect_entities;
  const std::filesystem::path dir(run_dir);
  const std::string trace_path = (dir / "trace.json").string();
  const std::string stego_path = (dir / "stego.txt").string();
  for (const auto& p : {trace_path, stego_path}) {
    if (!std::filesystem::exists(p)) {
      throw Error(ErrorCode::kIo, "missing ground truth file '" + p + "'");
    }
  }
  const OntologyTree tree = LoadConfiguredTree(c);
  const ClassDistribution dist = LoadConfiguredDistribution(c, tree);
  Agents agents(c, tree, g.verbose);
  const TraceFile trace =
      ParseTrace(json_util::ReadFile(trace_path), tree, trace_path);
  const ParsedStego stego =
      ParseStego(json_util::ReadFile(stego_path), stego_path);
  const EvalReport report =
      Evaluate(trace, stego.message.sentences, tree, dist, agents.backend(),
               options, c.feedback.sampling);
  const std::string table = ReportToTable(report);
  json_util::WriteFile((dir / "report.json").string(),
                       ReportToJson(report).dump(2) + "\n");
  json_util::WriteFile((dir / "report.txt").string(), table);
  std::fputs(table.c_str(), stdout);
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Hide bytes in sentences whose entities encode them."};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "seed for agents and nonce derivation");
  app.add_option("--mode", g.mode, "agent backend")
      ->check(CLI::IsMember({"mock", "live"}));
  app.add_option("--tree", g.tree, "ontology tree file");
  app.add_option("--dist", g.dist, "distribution file");
  app.add_option("--workers", g.workers, "concurrent sentence generations");
  app.add_flag("-v,--verbose", g.verbose, "log agent traffic to stderr");

  auto* build = app.add_subcommand("build-dist", "estimate a type distribution");
  std::string corpus, dist_out;
  std::uint32_t max_len = kDefaultMaxTypeLen;
  build->add_option("corpus", corpus, "one sentence per line")->required();
  build->add_option("out", dist_out, "distribution file to write")->required();
  build->add_option("--max-type-len", max_len, "drop longer types")
      ->check(CLI::Range(1, 64));

  auto* encode = app.add_subcommand("encode", "write stego sentences");
  std::string message_in, stego_out, trace_out;
  encode->add_option("message", message_in, "bytes to hide")->required();
  encode->add_option("out", stego_out, "stego file to write")->required();
  encode->add_option("--trace-out", trace_out, "ground-truth trace for eval");

  auto* decode = app.add_subcommand("decode", "recover bytes from stego");
  std::string stego_in, message_out;
  decode->add_option("stego", stego_in, "stego file")->required();
  decode->add_option("out", message_out, "recovered bytes")->required();

  auto* attack = app.add_subcommand("attack", "perturb stego sentences");
  std::string attack_in, attack_out, kind_name;
  AttackSpec attack_spec;
  attack->add_option("stego", attack_in, "stego file")->required();
  attack->add_option("out", attack_out, "perturbed stego file")->required();
  auto* kind_opt = attack->add_option("--kind", kind_name, "perturbation")
                       ->check(CLI::IsMember({"insert", "delete", "replace", "swap"}));
  auto* count_opt =
      attack->add_option("--count", attack_spec.count, "perturbations per sentence");
  auto* aseed_opt =
      attack->add_option("--attack-seed", attack_spec.seed, "perturbation seed");
  auto* protect_opt = attack->add_flag("--protect-entities",
                                       attack_spec.protect_entities,
                                       "leave entity mentions intact");

  auto* eval = app.add_subcommand("eval", "score a run directory");
  std::string run_dir;
  EvalOptions eval_options;
  eval->add_option("run_dir", run_dir, "holds stego.txt and trace.json")
      ->required();
  auto* ecount_opt = eval->add_option("--attack-count", eval_options.attack_count,
                                      "perturbations per sentence");
  auto* eseed_opt =
      eval->add_option("--attack-seed", eval_options.attack_seed, "perturbation seed");
  auto* eprotect_opt = eval->add_flag("--protect-entities",
                                      eval_options.protect_entities,
                                      "leave entity mentions intact");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return BuildDist(g, corpus, dist_out, max_len);
    if (*encode) return Encode(g, message_in, stego_out, trace_out);
    if (*decode) return Decode(g, stego_in, message_out);
    if (*attack) {
      if (kind_opt->count() > 0) attack_spec.kind = ParseAttackKind(kind_name);
      return RunAttack(g, attack_in, attack_out, attack_spec, kind_opt->count() > 0,
                       count_opt->count() > 0, aseed_opt->count() > 0, protect_opt->count() > 0);
    }
    if (*eval) {
      return Eval(g, run_dir, eval_options, ecount_opt->count() > 0, eseed_opt->count() > 0,
                  eprotect_opt->count() > 0);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace semsteg

int main(int argc, char** argv) { return semsteg::Main(argc, argv); }
