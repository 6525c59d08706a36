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

// Arithmetic coding over the semantic distribution: bits -> type by a
// layer-by-layer interval walk, and type -> the bit prefix its interval
// pins down.

#ifndef SEMSTEG_CODEC_H_
#define SEMSTEG_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "semsteg/bitstream.h"
#include "semsteg/crypto.h"
#include "semsteg/distribution.h"
#include "semsteg/error.h"
#include "semsteg/interval.h"
#include "semsteg/semantic_space.h"

namespace semsteg {

struct SampleTrace {
  std::vector<EntityId> sequence;  // canonical, nondecreasing
  Interval interval;
  std::size_t bits_embedded = 0;
  SemType sem_type;
  std::size_t bits_read = 0;  // lookahead inspected to make the choices
};

inline BitStream CommonPrefix(const IntervalState& state) {
  BitStream out;
  ForEachCommonPrefixBit(state.low(), state.low() + state.width(), state.den(),
                         [&](bool b) { out.push_back(b); });
  return out;
}

inline BitStream CommonPrefix(const Interval& interval) {
  if (!(0 <= interval.low && interval.low < interval.high &&
        interval.high <= 1)) {
    throw Error(ErrorCode::kValidation, "not a subinterval of [0,1): " +
                                            interval.str());
  }
  const mpz_class den = interval.low.get_den() * interval.high.get_den();
  BitStream out;
  ForEachCommonPrefixBit(interval.low.get_num() * interval.high.get_den(),
                         interval.high.get_num() * interval.low.get_den(), den,
                         [&](bool b) { out.push_back(b); });
  return out;
}

namespace internal {

inline constexpr std::size_t kMaxLookaheadBits = 1 << 16;

// The value B of a bit source, known so far to lie in the dyadic cell
// [v, v + 1) / 2^n.
template <BitSource S>
class LazyValue {
 public:
  explicit LazyValue(const S& bits) : bits_(bits) {}

  // Index of the child of `split` (within `state`) whose half-open range
  // contains B. Reads bits until the cell fits inside one child.
  std::size_t Locate(const IntervalState& state, const Split& split) {
    const mpz_class base = state.low() * split.total;
    const mpz_class scale = state.den() * split.total;
    while (true) {
      const mpz_class left = v_ * scale;
      const mpz_class right = left + scale;
      const mpz_class step = state.width() << n_;
      mpz_class lo = base << n_;
      for (std::size_t k = 0; k < split.weights.size(); ++k) {
        const std::uint64_t w = split.weights[k];
        if (w == 0) continue;
        mpz_class hi = lo + step * w;
        if (lo <= left && left < hi) {
          if (right <= hi) return k;
          break;
        }
        lo = std::move(hi);
      }
      ReadBit();
    }
  }

  std::size_t bits_read() const { return n_; }

 private:
  void ReadBit() {
    if (n_ >= kMaxLookaheadBits) {
      throw Error(ErrorCode::kInternal, "bit source never separated a boundary");
    }
    v_ <<= 1;
    if (bits_.bit(n_)) v_ += 1;
    ++n_;
  }

  const S& bits_;
  mpz_class v_ = 0;
  std::size_t n_ = 0;
};

}  // namespace internal

// Samples one type: from ROOT, repeatedly picks a concept, subconcept and
// entity (or stop) whose subinterval contains the value of `bits`.
template <BitSource S>
SampleTrace SampleType(const S& bits, const ClassDistribution& dist,
                       const OntologyTree& tree) {
  const ContinuationIndex& index = dist.index();
  IntervalState state;
  internal::LazyValue<S> value(bits);
  SampleTrace trace;
  std::uint32_t node = ContinuationIndex::root();
  while (true) {
    auto chosen = DescendOnce(index.node(node), tree, [&](const Split& split) {
      const std::size_t k = value.Locate(state, split);
      NarrowInto(state, split, k);
      return k;
    });
    if (!chosen) break;
    const EntityId e = tree.entity_at_rank(*chosen);
    trace.sequence.push_back(e);
    trace.sem_type.Add(e);
    node = *index.Follow(node, *chosen);
  }
  trace.interval = state.ToInterval();
  trace.bits_embedded = CommonPrefix(state).size();
  trace.bits_read = value.bits_read();
  return trace;
}

// The bits every stream sampling `t` starts with.
inline BitStream DecodeType(const SemType& t, const ClassDistribution& dist,
                            const OntologyTree& tree) {
  return CommonPrefix(ClassIntervalState(dist, tree, t));
}

// Bits sampled for sentence j: the framed cipher from `cursor` (zeros past
// the end) XOR keystream j.
struct SentenceBits {
  const BitStream* framed;
  std::size_t cursor;
  const Keystream* mask;

  bool bit(std::size_t i) const {
    const std::size_t j = cursor + i;
    const bool cipher = j < framed->size() && (*framed)[j];
    return cipher != mask->bit(i);
  }
};

// Samples types until every framed bit is carried. Each trace carries
// bits_embedded bits of the cipher starting where the previous one ended.
inline std::vector<SampleTrace> EmbedMessage(const BitStream& framed,
                                             const ClassDistribution& dist,
                                             const OntologyTree& tree,
                                             const KeystreamGenerator& keys) {
  if (dist.support_size() < 2) {
    throw Error(ErrorCode::kNoCapacity,
                "distribution has a single class; nothing can be embedded");
  }
  const std::size_t max_sentences = 64 * framed.size() + 1024;
  std::vector<SampleTrace> traces;
  std::size_t cursor = 0;
  do {
    if (traces.size() >= max_sentences) {
      throw Error(ErrorCode::kNoCapacity, "sampler is not making progress");
    }
    const Keystream mask = keys.Stream(traces.size());
    SentenceBits source{&framed, cursor, &mask};
    traces.push_back(SampleType(source, dist, tree));
    cursor += traces.back().bits_embedded;
  } while (cursor < framed.size());
  return traces;
}

// The cipher bits carried by sentence `index` of type `t`.
inline BitStream RecoverSentenceBits(const SemType& t, std::uint64_t index,
                                     const ClassDistribution& dist,
                                     const OntologyTree& tree,
                                     const KeystreamGenerator& keys) {
  const BitStream masked = DecodeType(t, dist, tree);
  const Keystream mask = keys.Stream(index);
  BitStream out;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    out.push_back(masked[i] != mask.bit(i));
  }
  return out;
}

}  // namespace semsteg

#endif  // SEMSTEG_CODEC_H_
