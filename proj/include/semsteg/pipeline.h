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

// Message-level embedding and extraction.

#ifndef SEMSTEG_PIPELINE_H_
#define SEMSTEG_PIPELINE_H_

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "semsteg/agents.h"
#include "semsteg/bitstream.h"
#include "semsteg/codec.h"
#include "semsteg/crypto.h"
#include "semsteg/distribution.h"
#include "semsteg/rng.h"
#include "semsteg/semantic_space.h"

namespace semsteg {

struct Session {
  const OntologyTree& tree;
  const ClassDistribution& dist;
  StegoKey key;
  FeedbackConfig feedback;
  AgentBackend& agents;
  std::uint64_t seed = 0;  // per-sentence agent seeds derive from this
  int workers = 1;         // concurrent sentence generations
};

struct StegoMessage {
  std::vector<std::string> sentences;
  std::vector<std::uint8_t> nonce;
};

struct SentenceRecord {
  SemType type;
  std::size_t bits_embedded = 0;
  BitStream embedded;  // the sampled stream's prefix this sentence carries
  int iterations = 0;
  std::vector<std::string> hints;
};

struct EncodeResult {
  StegoMessage message;
  std::vector<SentenceRecord> records;
  std::size_t framed_bits = 0;
};

inline std::uint64_t SentenceSeed(std::uint64_t session_seed,
                                  std::size_t index) {
  return MixSeed({session_seed, index});
}

// Frames and masks `secret`, samples one type per sentence, and has the
// agents write each sentence.
inline EncodeResult EncodeMessage(std::span<const std::uint8_t> secret,
                                  const Session& session) {
  if (session.dist.support_size() < 2 || session.dist.Entropy() <= 0) {
    throw Error(ErrorCode::kNoCapacity,
                "distribution has zero entropy; nothing can be embedded");
  }
  session.feedback.Validate();
  const KeystreamGenerator keys(session.key);
  const BitStream framed = FrameMessage(secret);
  const std::vector<SampleTrace> traces =
      EmbedMessage(framed, session.dist, session.tree, keys);

  EncodeResult result;
  result.framed_bits = framed.size();
  result.message.nonce = session.key.nonce;
  result.message.sentences.resize(traces.size());
  result.records.resize(traces.size());
  for (std::size_t j = 0; j < traces.size(); ++j) {
    SentenceRecord& r = result.records[j];
    r.type = traces[j].sem_type;
    r.bits_embedded = traces[j].bits_embedded;
    r.embedded = CommonPrefix(traces[j].interval);
  }

  auto generate = [&](std::size_t j) {
    GenerationResult g =
        GenerateStego(traces[j].sem_type, session.feedback, session.agents,
                      SentenceSeed(session.seed, j));
    result.message.sentences[j] = std::move(g.sentence);
    result.records[j].iterations = g.iterations;
    result.records[j].hints = std::move(g.hints);
  };

  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(session.workers, 1)), 1,
      traces.size());
  if (workers == 1) {
    for (std::size_t j = 0; j < traces.size(); ++j) generate(j);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t j = next.fetch_add(1);
        if (j >= traces.size()) return;
        try {
          generate(j);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first_error) first_error = std::current_exception();
          next = traces.size();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

enum class SentenceStatus { kOk, kUnknownClass, kSkipped };

inline std::string_view SentenceStatusName(SentenceStatus s) {
  switch (s) {
    case SentenceStatus::kOk: return "ok";
    case SentenceStatus::kUnknownClass: return "unknown class";
    case SentenceStatus::kSkipped: return "skipped";
  }
  return "?";
}

struct SentenceDecode {
  SentenceStatus status = SentenceStatus::kSkipped;
  SemType type;
  BitStream bits;  // cipher bits carried, when ok
  std::string detail;
};

struct DecodeReport {
  std::vector<SentenceDecode> sentences;
  BitStream recovered;  // cipher bits up to the first failed sentence
  std::optional<std::vector<std::uint8_t>> message;
  ErrorCode failure = ErrorCode::kInternal;  // meaningful when !message
  std::string failure_detail;

  bool ok() const { return message.has_value(); }
};

// Extracts each sentence's type and reassembles the framed message.
// Sentence failures are reported individually; message-level failures
// are reported in `failure`. Agent errors propagate.
inline DecodeReport DecodeMessage(const StegoMessage& stego,
                                  const Session& session) {
  StegoKey key = session.key;
  key.nonce = stego.nonce;
  const KeystreamGenerator keys(key);
  DecodeReport report;
  report.sentences.resize(stego.sentences.size());
  std::optional<std::size_t> first_bad;
  std::size_t last_bits = 0;
  for (std::size_t j = 0; j < stego.sentences.size(); ++j) {
    SentenceDecode& d = report.sentences[j];
    AgentRequest request;
    request.role = AgentRole::kExtract;
    request.sentence = stego.sentences[j];
    request.seed = SentenceSeed(session.seed, j);
    request.sampling = session.feedback.sampling;
    d.type = session.agents.Extract(request);
    try {
      d.bits = RecoverSentenceBits(d.type, j, session.dist, session.tree, keys);
      d.status = SentenceStatus::kOk;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnknownClass) throw;
      d.status = SentenceStatus::kUnknownClass;
      d.detail = e.detail();
      if (!first_bad) first_bad = j;
      continue;
    }
    if (!first_bad) {
      report.recovered.Append(d.bits);
      last_bits = d.bits.size();
    }
  }

  auto fail = [&](ErrorCode code, std::string detail) {
    report.failure = code;
    report.failure_detail = std::move(detail);
    return report;
  };
  if (stego.sentences.empty()) {
    return fail(ErrorCode::kTruncatedMessage, "no sentences");
  }
  std::size_t declared;
  try {
    declared = FramedLengthBits(report.recovered);
  } catch (const Error& e) {
    return fail(e.code(), e.detail());
  }
  const std::size_t needed = kHeaderBits + declared;
  if (declared % 8 != 0) {
    return fail(ErrorCode::kCorruptMessage,
                "declared length " + std::to_string(declared) +
                    " bits is not whole bytes");
  }
  if (report.recovered.size() < needed) {
    return fail(ErrorCode::kTruncatedMessage,
                "header needs " + std::to_string(needed) + " bits, " +
                    std::to_string(report.recovered.size()) + " recovered" +
                    (first_bad ? "; sentence " + std::to_string(*first_bad) +
                                     " could not be decoded"
                               : ""));
  }
  if (first_bad) {
    return fail(ErrorCode::kCorruptMessage,
                "sentence " + std::to_string(*first_bad) +
                    " could not be decoded");
  }
  // The encoder stops at the first sentence reaching the end of the frame.
  if (report.recovered.size() - last_bits >= needed) {
    return fail(ErrorCode::kCorruptMessage,
                "message ends before the last sentence");
  }
  report.message = UnframeMessage(report.recovered);
  return report;
}

// Stego file: a header comment line, then one sentence per line.
//   # semsteg v1 nonce=<hex> sentences=<n>
inline std::string SerializeStego(const StegoMessage& m) {
  std::string out = "# semsteg v1 nonce=" + HexEncode(m.nonce) +
                    " sentences=" + std::to_string(m.sentences.size()) + "\n";
  for (const std::string& s : m.sentences) {
    if (s.find_first_of("\r\n") != std::string::npos) {
      throw Error(ErrorCode::kValidation, "sentence spans several lines");
    }
    out += s;
    out += '\n';
  }
  return out;
}

struct ParsedStego {
  StegoMessage message;
  std::size_t declared_sentences = 0;
};

inline ParsedStego ParseStego(std::string_view text,
                              const std::string& source = "<stego>") {
  std::vector<std::string> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string line(text.substr(0, nl));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  constexpr std::string_view kMagic = "# semsteg v1";
  if (lines.empty() || lines[0].rfind(kMagic, 0) != 0) {
    throw Error(ErrorCode::kParse, source + ":1: missing '# semsteg v1' header");
  }
  ParsedStego out;
  bool have_nonce = false;
  bool have_count = false;
  for (std::string_view field :
       unicode::SplitWhitespace(std::string_view(lines[0]).substr(kMagic.size()))) {
    const std::size_t eq = field.find('=');
    const std::string_view name = field.substr(0, eq);
    const std::string_view value =
        eq == std::string_view::npos ? "" : field.substr(eq + 1);
    if (name == "nonce") {
      try {
        out.message.nonce = HexDecode(value, "nonce");
      } catch (const Error&) {
        throw Error(ErrorCode::kParse, source + ":1: nonce is not hex");
      }
      have_nonce = !out.message.nonce.empty();
    } else if (name == "sentences") {
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::kParse, source + ":1: bad sentence count");
      }
      out.declared_sentences = n;
      have_count = true;
    }
  }
  if (!have_nonce || !have_count) {
    throw Error(ErrorCode::kParse, source + ":1: header needs nonce and sentences");
  }
  out.message.sentences.assign(lines.begin() + 1, lines.end());
  return out;
}

}  // namespace semsteg

#endif  // SEMSTEG_PIPELINE_H_
