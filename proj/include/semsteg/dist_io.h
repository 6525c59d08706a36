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

// Distribution files and corpus ingestion.

#ifndef SEMSTEG_DIST_IO_H_
#define SEMSTEG_DIST_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semsteg/distribution.h"
#include "semsteg/json_util.h"
#include "semsteg/semantic_space.h"
#include "semsteg/unicode.h"

namespace semsteg {

// {"Location/City/Paris": 1, ...}
inline json_util::Json TypeToJson(const SemType& t, const OntologyTree& tree) {
  json_util::Json out = json_util::Json::object();
  for (EntityId id : CanonicalSequence(t, tree)) {
    const std::string path = tree.entity(id).path.str();
    if (!out.contains(path)) out[path] = t.count(id);
  }
  return out;
}

inline SemType TypeFromJson(const json_util::Json& j, const OntologyTree& tree,
                            const std::string& where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, where + ": type must be an object");
  }
  SemType t;
  for (const auto& [path, count] : j.items()) {
    const auto id = tree.FindByPath(path);
    if (!id) {
      throw Error(ErrorCode::kValidation,
                  where + ": unknown entity path '" + path + "'");
    }
    if (!count.is_number_unsigned() || count.get<std::uint64_t>() == 0 ||
        count.get<std::uint64_t>() > 1000) {
      throw Error(ErrorCode::kParse,
                  where + ": count for '" + path + "' must be in [1, 1000]");
    }
    t.Add(*id, count.get<std::uint32_t>());
  }
  return t;
}

// Entries appear in canonical interval order.
inline std::string SerializeDistribution(const ClassDistribution& dist,
                                         const OntologyTree& tree) {
  std::vector<std::pair<std::vector<std::uint32_t>, const SemType*>> keyed;
  for (const auto& [type, count] : dist.counts()) {
    std::vector<std::uint32_t> ranks;
    for (EntityId id : CanonicalSequence(type, tree)) {
      ranks.push_back(tree.rank(id));
    }
    keyed.emplace_back(std::move(ranks), &type);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  json_util::Json entries = json_util::Json::array();
  for (const auto& [ranks, type] : keyed) {
    entries.push_back(
        {{"type", TypeToJson(*type, tree)}, {"count", dist.count(*type)}});
  }
  json_util::Json doc = {{"version", 1},
                         {"total", dist.total()},
                         {"max_type_len", dist.max_type_len()},
                         {"entries", std::move(entries)}};
  return doc.dump(1) + "\n";
}

inline ClassDistribution ParseDistribution(std::string_view text,
                                           const OntologyTree& tree,
                                           const std::string& source =
                                               "<distribution>") {
  using json_util::Field;
  using json_util::Json;
  const Json doc = json_util::Parse(text, source);
  json_util::CheckVersion(doc, source);
  const auto total = Field<std::uint64_t>(doc, "total", source);
  const auto max_len =
      doc.contains("max_type_len")
          ? Field<std::uint32_t>(doc, "max_type_len", source)
          : kDefaultMaxTypeLen;
  const Json entries = Field<Json>(doc, "entries", source);
  if (!entries.is_array()) {
    throw Error(ErrorCode::kParse, source + ": 'entries' must be an array");
  }
  ClassDistribution::Counts counts;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = source + ": entries[" + std::to_string(i) + "]";
    const SemType t = TypeFromJson(Field<Json>(entries[i], "type", where),
                                   tree, where);
    const auto count = Field<std::uint64_t>(entries[i], "count", where);
    if (count == 0) throw Error(ErrorCode::kParse, where + ": zero count");
    if (TypeLen(t) > max_len) {
      throw Error(ErrorCode::kValidation,
                  where + ": type longer than max_type_len");
    }
    if (!counts.emplace(t, count).second) {
      throw Error(ErrorCode::kValidation, where + ": duplicate type");
    }
    sum += count;
  }
  if (sum != total) {
    throw Error(ErrorCode::kValidation,
                source + ": counts sum to " + std::to_string(sum) +
                    ", header says " + std::to_string(total));
  }
  return ClassDistribution::FromCounts(counts, tree, max_len);
}

inline ClassDistribution LoadDistribution(const std::string& path,
                                          const OntologyTree& tree) {
  return ParseDistribution(json_util::ReadFile(path), tree, path);
}

// One record per non-blank line.
inline std::vector<SemType> ExtractCorpus(std::string_view text,
                                          const OntologyTree& tree,
                                          const std::string& source =
                                              "<corpus>") {
  std::vector<SemType> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!unicode::IsValidUtf8(line)) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(line_no) +
                                         ": invalid UTF-8");
    }
    if (unicode::SplitWhitespace(line).empty()) continue;
    records.push_back(ExtractType(line, tree));
  }
  return records;
}

}  // namespace semsteg

#endif  // SEMSTEG_DIST_IO_H_
