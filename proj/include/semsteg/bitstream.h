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

#ifndef SEMSTEG_BITSTREAM_H_
#define SEMSTEG_BITSTREAM_H_

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsteg/error.h"

namespace semsteg {

// Anything that yields bit i of an (unbounded) stream.
template <typename S>
concept BitSource = requires(const S& s, std::size_t i) {
  { s.bit(i) } -> std::convertible_to<bool>;
};

// An ordered bit sequence with a read cursor. Bits before the cursor are
// consumed and never modified.
class BitStream {
 public:
  BitStream() = default;

  static BitStream FromString(std::string_view bits) {
    BitStream out;
    for (char c : bits) {
      if (c != '0' && c != '1') {
        throw Error(ErrorCode::kParse,
                    "bit string contains '" + std::string(1, c) + "'");
      }
      out.push_back(c == '1');
    }
    return out;
  }

  // MSB-first within each byte.
  static BitStream FromBytes(std::span<const std::uint8_t> bytes) {
    BitStream out;
    out.bits_.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes) {
      for (int k = 7; k >= 0; --k) out.push_back(((b >> k) & 1) != 0);
    }
    return out;
  }

  // Trailing partial bytes are zero-filled.
  std::vector<std::uint8_t> ToBytes() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
  }

  std::string ToString() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto b : bits_) out.push_back(b ? '1' : '0');
    return out;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  bool bit(std::size_t i) const { return bits_.at(i) != 0; }

  void push_back(bool b) { bits_.push_back(b ? 1 : 0); }
  void Append(const BitStream& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }

  BitStream Slice(std::size_t begin, std::size_t length) const {
    if (begin > bits_.size() || length > bits_.size() - begin) {
      throw Error(ErrorCode::kInternal, "bit slice out of range");
    }
    BitStream out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(begin),
                     bits_.begin() + static_cast<std::ptrdiff_t>(begin + length));
    return out;
  }

  bool IsPrefixOf(const BitStream& other) const {
    if (bits_.size() > other.bits_.size()) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] != other.bits_[i]) return false;
    }
    return true;
  }

  std::size_t cursor() const { return cursor_; }
  std::size_t remaining() const { return bits_.size() - cursor_; }

  // Returns the next n bits and advances the cursor.
  BitStream Consume(std::size_t n) {
    if (n > remaining()) {
      throw Error(ErrorCode::kInternal, "consume past end of bit stream");
    }
    BitStream out = Slice(cursor_, n);
    cursor_ += n;
    return out;
  }

  // Equality compares bit content, not the cursor.
  friend bool operator==(const BitStream& a, const BitStream& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t cursor_ = 0;
};

// Reads `bits` from `offset`, with zeros past the end.
struct ZeroPaddedBits {
  const BitStream* bits;
  std::size_t offset = 0;

  bool bit(std::size_t i) const {
    const std::size_t j = offset + i;
    return j < bits->size() && (*bits)[j];
  }
};

}  // namespace semsteg

#endif  // SEMSTEG_BITSTREAM_H_
