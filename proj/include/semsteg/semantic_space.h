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

// Entities, the three-level ontology-entity tree, the type algebra over
// entity multisets, and the offline gazetteer extractor.

#ifndef SEMSTEG_SEMANTIC_SPACE_H_
#define SEMSTEG_SEMANTIC_SPACE_H_

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "semsteg/error.h"
#include "semsteg/unicode.h"

namespace semsteg {

struct EntityId {
  std::uint32_t value = 0;
  friend auto operator<=>(const EntityId&, const EntityId&) = default;
};

// concept / subconcept / entity, e.g. "Location/Tourism Location/Las Vegas".
class EntityPath {
 public:
  static constexpr std::size_t kDepth = 3;

  EntityPath() = default;

  static EntityPath Parse(std::string_view text) {
    EntityPath path;
    std::size_t segment = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i < text.size() && text[i] != '/') continue;
      if (segment == kDepth) {
        throw Error(ErrorCode::kValidation,
                    "path '" + std::string(text) + "' has more than " +
                        std::to_string(kDepth) + " segments");
      }
      std::string_view piece = text.substr(start, i - start);
      if (piece.empty() || unicode::SplitWhitespace(piece).empty() ||
          unicode::IsSpace(static_cast<unsigned char>(piece.front())) ||
          unicode::IsSpace(static_cast<unsigned char>(piece.back()))) {
        throw Error(ErrorCode::kValidation,
                    "path '" + std::string(text) +
                        "' has an empty or untrimmed segment");
      }
      path.segments_[segment++] = std::string(piece);
      start = i + 1;
    }
    if (segment != kDepth) {
      throw Error(ErrorCode::kValidation,
                  "path '" + std::string(text) + "' has " +
                      std::to_string(segment) + " segments, expected " +
                      std::to_string(kDepth));
    }
    return path;
  }

  const std::string& concept_name() const { return segments_[0]; }
  const std::string& subconcept() const { return segments_[1]; }
  const std::string& leaf() const { return segments_[2]; }

  std::string str() const {
    return segments_[0] + "/" + segments_[1] + "/" + segments_[2];
  }

  friend bool operator==(const EntityPath&, const EntityPath&) = default;

 private:
  std::array<std::string, kDepth> segments_;
};

struct Entity {
  EntityId id;
  std::vector<std::string> surface_forms;  // canonical form first
  EntityPath path;

  const std::string& canonical_surface() const { return surface_forms.front(); }
  friend bool operator==(const Entity&, const Entity&) = default;
};

// A multiset of entities. Zero counts are never stored.
class SemType {
 public:
  using Counts = std::map<EntityId, std::uint32_t>;

  SemType() = default;
  SemType(std::initializer_list<std::pair<const EntityId, std::uint32_t>> init) {
    for (const auto& [id, n] : init) Add(id, n);
  }

  void Add(EntityId id, std::uint32_t n = 1) {
    if (n == 0) return;
    counts_[id] += n;
  }

  std::uint32_t count(EntityId id) const {
    auto it = counts_.find(id);
    return it == counts_.end() ? 0 : it->second;
  }

  const Counts& counts() const { return counts_; }
  bool empty() const { return counts_.empty(); }

  friend bool operator==(const SemType&, const SemType&) = default;
  friend bool operator<(const SemType& a, const SemType& b) {
    return a.counts_ < b.counts_;
  }

 private:
  Counts counts_;
};

// |T|: total number of entity occurrences.
inline std::uint64_t TypeLen(const SemType& t) {
  std::uint64_t n = 0;
  for (const auto& [id, count] : t.counts()) n += count;
  return n;
}

// a <= b iff every entity count of a is at most its count in b.
inline bool TypeLeq(const SemType& a, const SemType& b) {
  for (const auto& [id, count] : a.counts()) {
    if (count > b.count(id)) return false;
  }
  return true;
}

inline SemType TypeAdd(const SemType& a, const SemType& b) {
  SemType sum = a;
  for (const auto& [id, count] : b.counts()) sum.Add(id, count);
  return sum;
}

// The class C(T) of all sentences with type T.
struct ClassRef {
  SemType sem_type;
  friend bool operator==(const ClassRef&, const ClassRef&) = default;
};

// A gazetteer match in folded text, byte offsets [begin, end).
struct Mention {
  EntityId entity;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Longest-match, left-to-right, non-overlapping surface matcher over folded
// text. Matches must start and end on word boundaries.
class Gazetteer {
 public:
  Gazetteer() : nodes_(1) {}

  // Later insertions of an existing surface are ignored, so insert entities
  // in canonical order to make the canonically-first path win.
  void Insert(std::string_view folded_surface, EntityId id) {
    std::size_t node = 0;
    for (unsigned char ch : folded_surface) {
      auto& next = nodes_[node].next;
      auto it = std::lower_bound(
          next.begin(), next.end(), ch,
          [](const auto& edge, unsigned char c) { return edge.first < c; });
      if (it != next.end() && it->first == ch) {
        node = it->second;
      } else {
        const auto child = static_cast<std::uint32_t>(nodes_.size());
        next.insert(it, {ch, child});
        nodes_.emplace_back();
        node = child;
      }
    }
    if (!nodes_[node].entity) nodes_[node].entity = id;
  }

  std::vector<Mention> Find(std::string_view folded) const {
    std::vector<Mention> mentions;
    std::size_t i = 0;
    char32_t prev = U' ';
    while (i < folded.size()) {
      std::size_t after_first = i;
      const char32_t first = unicode::NextCodePoint(folded, after_first);
      std::optional<Mention> best;
      if (!(unicode::IsWordChar(prev) && unicode::IsWordChar(first))) {
        std::size_t node = 0;
        for (std::size_t j = i; j < folded.size(); ++j) {
          const auto& next = nodes_[node].next;
          const auto ch = static_cast<unsigned char>(folded[j]);
          auto it = std::lower_bound(
              next.begin(), next.end(), ch,
              [](const auto& edge, unsigned char c) { return edge.first < c; });
          if (it == next.end() || it->first != ch) break;
          node = it->second;
          if (nodes_[node].entity && AtEndBoundary(folded, j + 1)) {
            best = Mention{*nodes_[node].entity, i, j + 1};
          }
        }
      }
      if (best) {
        mentions.push_back(*best);
        prev = unicode::PrevCodePoint(folded, best->end);
        i = best->end;
      } else {
        prev = first;
        i = after_first;
      }
    }
    return mentions;
  }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::uint32_t>> next;
    std::optional<EntityId> entity;
  };

  static bool AtEndBoundary(std::string_view s, std::size_t end) {
    if (end >= s.size()) return true;
    // Only complete code points can end a surface.
    if ((static_cast<unsigned char>(s[end]) & 0xC0) == 0x80) return false;
    std::size_t at = end;
    const char32_t next = unicode::NextCodePoint(s, at);
    const char32_t last = unicode::PrevCodePoint(s, end);
    return !(unicode::IsWordChar(last) && unicode::IsWordChar(next));
  }

  std::vector<Node> nodes_;
};

// Immutable after construction; safe to share across threads.
class OntologyTree {
 public:
  static constexpr int kRoot = 0;

  struct Node {
    std::string name;
    int parent = -1;
    int depth = 0;  // 0 root, 1 concept, 2 subconcept, 3 entity
    std::vector<int> children;  // in canonical order
    std::optional<EntityId> entity;
  };

  OntologyTree() { nodes_.push_back(Node{"ROOT", -1, 0, {}, std::nullopt}); }

  // Validates and indexes `entities`. Ids must be dense (0..n-1) and unique;
  // paths must be unique.
  static OntologyTree Build(std::vector<Entity> entities) {
    OntologyTree tree;
    const std::size_t n = entities.size();
    std::vector<bool> seen(n, false);
    for (auto& e : entities) {
      if (e.id.value >= n) {
        throw Error(ErrorCode::kValidation,
                    "entity id " + std::to_string(e.id.value) +
                        " is not dense (expected ids 0.." +
                        std::to_string(n == 0 ? 0 : n - 1) + ")");
      }
      if (seen[e.id.value]) {
        throw Error(ErrorCode::kValidation,
                    "duplicate entity id " + std::to_string(e.id.value));
      }
      seen[e.id.value] = true;
      if (e.surface_forms.empty()) {
        throw Error(ErrorCode::kValidation,
                    "entity '" + e.path.str() + "' has no surface forms");
      }
      for (auto& s : e.surface_forms) {
        auto tokens = unicode::SplitWhitespace(s);
        if (tokens.empty()) {
          throw Error(ErrorCode::kValidation,
                      "entity '" + e.path.str() + "' has an empty surface");
        }
        s = std::string(tokens.front().data(),
                        tokens.back().data() + tokens.back().size());
      }
    }
    std::sort(entities.begin(), entities.end(),
              [](const Entity& a, const Entity& b) { return a.id < b.id; });
    tree.entities_ = std::move(entities);

    std::vector<std::pair<std::string, EntityId>> keyed;
    keyed.reserve(n);
    for (const auto& e : tree.entities_) keyed.emplace_back(e.path.str(), e.id);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 1; i < keyed.size(); ++i) {
      if (keyed[i].first == keyed[i - 1].first) {
        throw Error(ErrorCode::kValidation,
                    "duplicate entity path '" + keyed[i].first + "'");
      }
    }

    tree.order_.reserve(n);
    tree.rank_.assign(n, 0);
    tree.leaf_node_.assign(n, 0);
    for (const auto& [path_str, id] : keyed) {
      tree.rank_[id.value] = static_cast<std::uint32_t>(tree.order_.size());
      tree.order_.push_back(id);
      tree.by_path_.emplace(path_str, id);
      const EntityPath& path = tree.entities_[id.value].path;
      const int concept_node =
          tree.ChildNamed(kRoot, path.concept_name(), 1);
      const int sub_node = tree.ChildNamed(concept_node, path.subconcept(), 2);
      const int leaf = static_cast<int>(tree.nodes_.size());
      tree.nodes_.push_back(Node{path.leaf(), sub_node, 3, {}, id});
      tree.nodes_[sub_node].children.push_back(leaf);
      tree.leaf_node_[id.value] = leaf;
      tree.concept_of_rank_.push_back(concept_node);
      tree.sub_of_rank_.push_back(sub_node);
    }

    for (EntityId id : tree.order_) {
      for (const auto& s : tree.entities_[id.value].surface_forms) {
        std::string folded = unicode::Fold(s);
        if (folded.empty()) {
          throw Error(ErrorCode::kValidation, "surface '" + s +
                                                  "' folds to empty text");
        }
        tree.gazetteer_.Insert(folded, id);
      }
    }
    return tree;
  }

  std::size_t size() const { return entities_.size(); }
  const std::vector<Entity>& entities() const { return entities_; }

  const Entity& entity(EntityId id) const {
    if (id.value >= entities_.size()) {
      throw Error(ErrorCode::kValidation,
                  "unknown entity id " + std::to_string(id.value));
    }
    return entities_[id.value];
  }

  bool contains(EntityId id) const { return id.value < entities_.size(); }

  std::optional<EntityId> FindByPath(std::string_view path) const {
    auto it = by_path_.find(std::string(path));
    if (it == by_path_.end()) return std::nullopt;
    return it->second;
  }

  // Entities ordered by path string.
  std::span<const EntityId> canonical_order() const { return order_; }
  std::uint32_t rank(EntityId id) const { return rank_[entity(id).id.value]; }

  const std::vector<Node>& nodes() const { return nodes_; }
  int leaf_node(EntityId id) const { return leaf_node_[entity(id).id.value]; }

  // Ancestor of the entity's leaf at `depth` (1 concept, 2 subconcept).
  int ancestor(EntityId id, int depth) const {
    int node = leaf_node(id);
    while (nodes_[node].depth > depth) node = nodes_[node].parent;
    return node;
  }

  // Concept (depth 1) and subconcept (depth 2) node of the entity at a
  // canonical rank.
  int concept_at_rank(std::uint32_t rank) const { return concept_of_rank_[rank]; }
  int subconcept_at_rank(std::uint32_t rank) const { return sub_of_rank_[rank]; }
  EntityId entity_at_rank(std::uint32_t rank) const { return order_[rank]; }

  const Gazetteer& gazetteer() const { return gazetteer_; }

  friend bool operator==(const OntologyTree& a, const OntologyTree& b) {
    return a.entities_ == b.entities_;
  }

 private:
  int ChildNamed(int parent, const std::string& name, int depth) {
    auto& children = nodes_[parent].children;
    // Groups are contiguous in canonical order, so only the last child can
    // share the name.
    if (!children.empty() && nodes_[children.back()].name == name) {
      return children.back();
    }
    const int node = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{name, parent, depth, {}, std::nullopt});
    nodes_[parent].children.push_back(node);
    return node;
  }

  std::vector<Entity> entities_;  // indexed by id
  std::vector<EntityId> order_;
  std::vector<std::uint32_t> rank_;
  std::vector<int> leaf_node_;
  std::vector<int> concept_of_rank_;
  std::vector<int> sub_of_rank_;
  std::unordered_map<std::string, EntityId> by_path_;
  std::vector<Node> nodes_;
  Gazetteer gazetteer_;
};

// The entities of `t` in canonical order, each repeated by its count. This
// is the unique sampling path for t.
inline std::vector<EntityId> CanonicalSequence(const SemType& t,
                                               const OntologyTree& tree) {
  std::vector<EntityId> seq;
  seq.reserve(TypeLen(t));
  for (const auto& [id, count] : t.counts()) {
    seq.insert(seq.end(), count, id);
  }
  std::stable_sort(seq.begin(), seq.end(), [&](EntityId a, EntityId b) {
    return tree.rank(a) < tree.rank(b);
  });
  return seq;
}

// Whitespace tokens of a sentence and their folded forms joined by single
// spaces; token_begin[i] is the byte offset of token i in `folded`.
struct FoldedText {
  std::string folded;
  std::vector<std::size_t> token_begin;
};

inline FoldedText FoldTokens(std::string_view sentence) {
  FoldedText out;
  for (std::string_view token : unicode::SplitWhitespace(sentence)) {
    if (!out.folded.empty()) out.folded.push_back(' ');
    out.token_begin.push_back(out.folded.size());
    out.folded += unicode::FoldToken(token);
  }
  return out;
}

// Ext: counts the tree entities mentioned in `sentence`.
inline SemType ExtractType(std::string_view sentence, const OntologyTree& tree) {
  SemType t;
  for (const Mention& m : tree.gazetteer().Find(unicode::Fold(sentence))) {
    t.Add(m.entity);
  }
  return t;
}

// For each whitespace token of `sentence`, the index of the mention it
// overlaps, or -1.
inline std::vector<int> MentionTokenSpans(std::string_view sentence,
                                          const OntologyTree& tree) {
  FoldedText text = FoldTokens(sentence);
  const std::size_t n = text.token_begin.size();
  std::vector<int> spans(n, -1);
  const std::vector<Mention> mentions = tree.gazetteer().Find(text.folded);
  for (std::size_t k = 0; k < mentions.size(); ++k) {
    const Mention& m = mentions[k];
    // Token i spans [token_begin[i], token_begin[i+1] - 1).
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t begin = text.token_begin[i];
      const std::size_t end =
          i + 1 < n ? text.token_begin[i + 1] - 1 : text.folded.size();
      if (begin < m.end && m.begin < end) spans[i] = static_cast<int>(k);
    }
  }
  return spans;
}

inline std::vector<bool> MentionTokenMask(std::string_view sentence,
                                          const OntologyTree& tree) {
  std::vector<bool> mask;
  for (int span : MentionTokenSpans(sentence, tree)) mask.push_back(span >= 0);
  return mask;
}

inline std::string TypeToString(const SemType& t, const OntologyTree& tree) {
  std::string out = "{";
  bool first = true;
  for (EntityId id : tree.canonical_order()) {
    const std::uint32_t n = t.count(id);
    if (n == 0) continue;
    if (!first) out += ", ";
    first = false;
    out += tree.entity(id).path.str() + ":" + std::to_string(n);
  }
  return out + "}";
}

}  // namespace semsteg

#endif  // SEMSTEG_SEMANTIC_SPACE_H_
