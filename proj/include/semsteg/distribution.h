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

// Empirical class distribution p(C(T)), the per-node probability
// assignment for a type prefix, and the layer-by-layer walk that maps a
// type to its probability interval.

#ifndef SEMSTEG_DISTRIBUTION_H_
#define SEMSTEG_DISTRIBUTION_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semsteg/error.h"
#include "semsteg/interval.h"
#include "semsteg/semantic_space.h"

namespace semsteg {

inline constexpr std::uint32_t kDefaultMaxTypeLen = 4;

// Prefix trie over the canonical entity sequences of the supported types.
// Node weights are occurrence counts: `stop` counts types equal to the
// prefix, each edge counts types whose sequence continues with that entity.
class ContinuationIndex {
 public:
  struct Edge {
    std::uint32_t rank;  // canonical rank of the next entity
    std::uint64_t weight;
    std::uint32_t child;
  };
  struct Node {
    std::uint64_t stop = 0;
    std::uint64_t total = 0;
    std::vector<Edge> edges;  // ascending rank
  };

  ContinuationIndex() : nodes_(1) {}

  void Add(std::span<const std::uint32_t> ranks, std::uint64_t count) {
    std::uint32_t node = 0;
    for (std::uint32_t rank : ranks) {
      nodes_[node].total += count;
      auto& edges = nodes_[node].edges;
      auto it = std::lower_bound(
          edges.begin(), edges.end(), rank,
          [](const Edge& e, std::uint32_t r) { return e.rank < r; });
      if (it == edges.end() || it->rank != rank) {
        const auto child = static_cast<std::uint32_t>(nodes_.size());
        it = edges.insert(it, Edge{rank, 0, child});
        nodes_.emplace_back();
      }
      it->weight += count;
      node = it->child;
    }
    nodes_[node].total += count;
    nodes_[node].stop += count;
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  static constexpr std::uint32_t root() { return 0; }

  std::optional<std::uint32_t> Follow(std::uint32_t id,
                                      std::uint32_t rank) const {
    const auto& edges = nodes_[id].edges;
    auto it = std::lower_bound(
        edges.begin(), edges.end(), rank,
        [](const Edge& e, std::uint32_t r) { return e.rank < r; });
    if (it == edges.end() || it->rank != rank) return std::nullopt;
    return it->child;
  }

 private:
  std::vector<Node> nodes_;
};

// Immutable after construction. Probabilities are count / total.
class ClassDistribution {
 public:
  using Counts = std::map<SemType, std::uint64_t>;

  // Drops types longer than max_type_len (renormalizing); every entity must
  // exist in `tree`.
  static ClassDistribution FromCounts(const Counts& counts,
                                      const OntologyTree& tree,
                                      std::uint32_t max_type_len =
                                          kDefaultMaxTypeLen) {
    ClassDistribution dist;
    dist.max_type_len_ = max_type_len;
    for (const auto& [type, count] : counts) {
      for (const auto& [id, n] : type.counts()) {
        if (!tree.contains(id)) {
          throw Error(ErrorCode::kValidation,
                      "type references unknown entity id " +
                          std::to_string(id.value));
        }
      }
      if (count == 0 || TypeLen(type) > max_type_len) continue;
      dist.counts_.emplace(type, count);
      dist.total_ += count;
    }
    if (dist.total_ == 0) {
      throw Error(ErrorCode::kEmptyCorpus,
                  counts.empty() ? "no records"
                                 : "no record within max_type_len " +
                                       std::to_string(max_type_len));
    }
    std::vector<std::uint32_t> ranks;
    for (const auto& [type, count] : dist.counts_) {
      ranks.clear();
      for (EntityId id : CanonicalSequence(type, tree)) {
        ranks.push_back(tree.rank(id));
      }
      dist.index_.Add(ranks, count);
    }
    return dist;
  }

  const Counts& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }
  std::uint32_t max_type_len() const { return max_type_len_; }
  std::size_t support_size() const { return counts_.size(); }
  const ContinuationIndex& index() const { return index_; }

  std::uint64_t count(const SemType& t) const {
    auto it = counts_.find(t);
    return it == counts_.end() ? 0 : it->second;
  }

  Rational probability(const SemType& t) const {
    return MakeRational(count(t), total_);
  }

  // Shannon entropy in bits.
  double Entropy() const {
    double h = 0;
    for (const auto& [type, count] : counts_) {
      const double p = static_cast<double>(count) / static_cast<double>(total_);
      h -= p * std::log2(p);
    }
    return h;
  }

 private:
  Counts counts_;
  std::uint64_t total_ = 0;
  std::uint32_t max_type_len_ = kDefaultMaxTypeLen;
  ContinuationIndex index_;
};

// Frequency estimate over corpus records.
inline ClassDistribution BuildDistribution(
    std::span<const SemType> records, const OntologyTree& tree,
    std::uint32_t max_type_len = kDefaultMaxTypeLen) {
  if (records.empty()) throw Error(ErrorCode::kEmptyCorpus, "no records");
  ClassDistribution::Counts counts;
  for (const SemType& r : records) ++counts[r];
  return ClassDistribution::FromCounts(counts, tree, max_type_len);
}

struct NodeProbabilities {
  std::vector<Rational> entity;  // indexed by entity id
  std::vector<Rational> node;    // indexed by tree node; root holds 1 - stop
  Rational stop;
};

// Probability of continuing a type prefix with each entity, or stopping.
//
// A class T contributes to entity e when T >= t_pre + e and e is the
// canonically smallest entity of T - t_pre, i.e. T's canonical sequence is
// t_pre's followed by e. Candidates are restricted to entities ranked at or
// after both `last_entity` and every entity of t_pre, so each class is
// reached by exactly one path and the result is the exact conditional.
inline NodeProbabilities AssignProbabilities(
    const OntologyTree& tree, const ClassDistribution& dist,
    const SemType& t_pre, std::optional<EntityId> last_entity = std::nullopt) {
  std::uint32_t floor_rank = 0;
  if (last_entity) floor_rank = tree.rank(*last_entity);
  for (const auto& [id, n] : t_pre.counts()) {
    floor_rank = std::max(floor_rank, tree.rank(id));
  }

  NodeProbabilities out;
  out.entity.assign(tree.size(), Rational(0));
  out.node.assign(tree.nodes().size(), Rational(0));
  Rational sum = 0;
  for (EntityId e : tree.canonical_order()) {
    const std::uint32_t e_rank = tree.rank(e);
    if (e_rank < floor_rank) continue;
    SemType extended = t_pre;
    extended.Add(e);
    for (const auto& [type, count] : dist.counts()) {
      if (!TypeLeq(extended, type)) continue;
      bool smallest = true;
      for (const auto& [id, n] : type.counts()) {
        if (n > t_pre.count(id) && tree.rank(id) < e_rank) {
          smallest = false;
          break;
        }
      }
      if (smallest) out.entity[e.value] += MakeRational(count, dist.total());
    }
    sum += out.entity[e.value];
  }
  out.stop = dist.probability(t_pre);
  sum += out.stop;
  if (sum == 0) {
    throw Error(ErrorCode::kDeadPrefix,
                "prefix " + TypeToString(t_pre, tree) + " has no continuation");
  }
  for (auto& p : out.entity) {
    p /= sum;
  }
  out.stop /= sum;
  for (EntityId e : tree.canonical_order()) {
    const Rational& p = out.entity[e.value];
    if (p == 0) continue;
    int node = tree.leaf_node(e);
    out.node[node] += p;
    for (int parent = tree.nodes()[node].parent; parent != -1;
         parent = tree.nodes()[parent].parent) {
      out.node[parent] += p;
    }
  }
  return out;
}

inline constexpr int kStopLabel = -1;

// One proportional split of the current interval: child i covers
// weights[i] / total, children in canonical order with stop last.
struct Split {
  std::span<const std::uint64_t> weights;
  std::span<const int> labels;  // tree node, entity rank, or kStopLabel
  std::uint64_t total;
};

// Chooses one entity (or stop) at a trie node by descending the tree layer
// by layer: concept, then subconcept, then entity. `select(split)` returns
// the chosen child index and is responsible for narrowing the interval.
// Returns the chosen rank, or nullopt for stop.
template <typename Selector>
std::optional<std::uint32_t> DescendOnce(const ContinuationIndex::Node& node,
                                         const OntologyTree& tree,
                                         Selector&& select) {
  if (node.total == 0) {
    throw Error(ErrorCode::kDeadPrefix, "walk reached a zero-mass prefix");
  }
  const auto& edges = node.edges;
  std::vector<std::uint64_t> weights;
  std::vector<int> labels;
  std::vector<std::size_t> begin;

  auto group = [&](std::size_t from, std::size_t to, auto&& key) {
    weights.clear();
    labels.clear();
    begin.clear();
    for (std::size_t i = from; i < to; ++i) {
      const int label = key(edges[i].rank);
      if (labels.empty() || labels.back() != label) {
        labels.push_back(label);
        weights.push_back(0);
        begin.push_back(i);
      }
      weights.back() += edges[i].weight;
    }
    begin.push_back(to);
  };

  group(0, edges.size(),
        [&](std::uint32_t r) { return tree.concept_at_rank(r); });
  weights.push_back(node.stop);
  labels.push_back(kStopLabel);
  std::size_t k = select(Split{weights, labels, node.total});
  if (labels[k] == kStopLabel) return std::nullopt;

  std::size_t from = begin[k];
  std::size_t to = begin[k + 1];
  std::uint64_t total = weights[k];
  group(from, to, [&](std::uint32_t r) { return tree.subconcept_at_rank(r); });
  k = select(Split{weights, labels, total});

  from = begin[k];
  to = begin[k + 1];
  total = weights[k];
  group(from, to, [](std::uint32_t r) { return static_cast<int>(r); });
  k = select(Split{weights, labels, total});
  return edges[from + k].rank;
}

// Narrows `state` into child k of `split`.
inline void NarrowInto(IntervalState& state, const Split& split,
                       std::size_t k) {
  std::uint64_t before = 0;
  for (std::size_t i = 0; i < k; ++i) before += split.weights[i];
  state.Narrow(before, split.weights[k], split.total);
}

// Replays the walk for t's canonical sequence followed by stop.
inline IntervalState ClassIntervalState(const ClassDistribution& dist,
                                        const OntologyTree& tree,
                                        const SemType& t) {
  for (const auto& [id, n] : t.counts()) {
    if (!tree.contains(id)) {
      throw Error(ErrorCode::kUnknownClass,
                  "entity id " + std::to_string(id.value) + " not in tree");
    }
  }
  if (dist.count(t) == 0) {
    throw Error(ErrorCode::kUnknownClass,
                TypeToString(t, tree) + " has zero probability");
  }
  const std::vector<EntityId> seq = CanonicalSequence(t, tree);
  const auto& index = dist.index();
  IntervalState state;
  std::uint32_t node = ContinuationIndex::root();
  for (std::size_t step = 0; step <= seq.size(); ++step) {
    const bool stop = step == seq.size();
    const std::uint32_t rank = stop ? 0 : tree.rank(seq[step]);
    const int targets[3] = {
        stop ? kStopLabel : tree.concept_at_rank(rank),
        stop ? kStopLabel : tree.subconcept_at_rank(rank),
        static_cast<int>(rank)};
    int level = 0;
    auto chosen = DescendOnce(index.node(node), tree, [&](const Split& split) {
      const int want = targets[level++];
      for (std::size_t i = 0; i < split.labels.size(); ++i) {
        if (split.labels[i] == want && split.weights[i] > 0) {
          NarrowInto(state, split, i);
          return i;
        }
      }
      throw Error(ErrorCode::kUnknownClass,
                  TypeToString(t, tree) + " is not reachable");
    });
    if (stop) break;
    if (!chosen || *chosen != rank) {
      throw Error(ErrorCode::kInternal, "class replay diverged");
    }
    node = *index.Follow(node, rank);
  }
  return state;
}

// The probability interval [l, h) of class C(t).
inline Interval ClassInterval(const ClassDistribution& dist,
                              const OntologyTree& tree, const SemType& t) {
  return ClassIntervalState(dist, tree, t).ToInterval();
}

}  // namespace semsteg

#endif  // SEMSTEG_DISTRIBUTION_H_
