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

// Masking layer: a keyed counter-mode keystream XORed onto cipher bits,
// plus the 16-bit length framing of messages.

#ifndef SEMSTEG_CRYPTO_H_
#define SEMSTEG_CRYPTO_H_

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsteg/bitstream.h"
#include "semsteg/error.h"

namespace semsteg {

inline constexpr std::size_t kMinKeyBytes = 16;
inline constexpr std::size_t kHeaderBits = 16;
inline constexpr std::size_t kMaxMessageBytes = ((1u << kHeaderBits) - 1) / 8;

inline std::vector<std::uint8_t> HexDecode(std::string_view hex,
                                           const char* what) {
  std::vector<std::uint8_t> out(hex.size() / 2 + 1);
  std::size_t len = 0;
  const char* end = nullptr;
  if (hex.size() % 2 != 0 ||
      sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr,
                     &len, &end) != 0 ||
      end != hex.data() + hex.size()) {
    throw Error(ErrorCode::kConfig, std::string(what) + " is not valid hex");
  }
  out.resize(len);
  return out;
}

inline std::string HexEncode(std::span<const std::uint8_t> bytes) {
  std::string out(bytes.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), bytes.data(), bytes.size());
  out.pop_back();
  return out;
}

struct StegoKey {
  std::vector<std::uint8_t> key;    // >= 16 bytes
  std::vector<std::uint8_t> nonce;  // unique per message

  static StegoKey FromHex(std::string_view key_hex, std::string_view nonce_hex) {
    return StegoKey{HexDecode(key_hex, "key"), HexDecode(nonce_hex, "nonce")};
  }
};

inline void InitSodium() {
  if (sodium_init() < 0) {
    throw Error(ErrorCode::kInternal, "libsodium initialization failed");
  }
}

class Keystream;

// Derives a per-(key, nonce) ChaCha20 key once; streams are indexed so
// that each sentence can be masked independently.
class KeystreamGenerator {
 public:
  explicit KeystreamGenerator(const StegoKey& key) {
    InitSodium();
    if (key.key.size() < kMinKeyBytes) {
      throw Error(ErrorCode::kConfig,
                  "key must be at least " + std::to_string(kMinKeyBytes) +
                      " bytes");
    }
    if (key.nonce.empty()) throw Error(ErrorCode::kConfig, "nonce is empty");
    std::array<std::uint8_t, crypto_generichash_KEYBYTES_MAX> mac_key{};
    std::size_t mac_key_len = key.key.size();
    if (mac_key_len > mac_key.size()) {
      crypto_generichash(mac_key.data(), mac_key.size(), key.key.data(),
                         key.key.size(), nullptr, 0);
      mac_key_len = mac_key.size();
    } else {
      std::copy(key.key.begin(), key.key.end(), mac_key.begin());
    }
    static constexpr std::string_view kLabel = "semsteg/keystream/v1";
    crypto_generichash_state state;
    crypto_generichash_init(&state, mac_key.data(), mac_key_len,
                            subkey_.size());
    crypto_generichash_update(
        &state, reinterpret_cast<const unsigned char*>(kLabel.data()),
        kLabel.size());
    crypto_generichash_update(&state, key.nonce.data(), key.nonce.size());
    crypto_generichash_final(&state, subkey_.data(), subkey_.size());
    sodium_memzero(mac_key.data(), mac_key.size());
  }

  Keystream Stream(std::uint64_t index) const;

 private:
  friend class Keystream;
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_KEYBYTES> subkey_{};
};

// Lazily extended keystream; bit i is bit (7 - i % 8) of byte i / 8.
class Keystream {
 public:
  Keystream(const KeystreamGenerator& gen, std::uint64_t index)
      : gen_(&gen) {
    for (std::size_t i = 0; i < 8; ++i) {
      nonce_[i] = static_cast<std::uint8_t>(index >> (8 * i));
    }
  }

  bool bit(std::size_t i) const {
    const std::size_t byte = i / 8;
    if (byte >= bytes_.size()) Extend(byte + 1);
    return ((bytes_[byte] >> (7 - i % 8)) & 1) != 0;
  }

  BitStream Take(std::size_t offset, std::size_t count) const {
    BitStream out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(bit(offset + i));
    return out;
  }

 private:
  static constexpr std::size_t kBlock = 64;

  void Extend(std::size_t at_least) const {
    const std::size_t old = bytes_.size();
    const std::size_t grow =
        std::max<std::size_t>((at_least - old + kBlock - 1) / kBlock * kBlock,
                              4 * kBlock);
    bytes_.resize(old + grow, 0);
    crypto_stream_chacha20_ietf_xor_ic(
        bytes_.data() + old, bytes_.data() + old, grow, nonce_.data(),
        static_cast<std::uint32_t>(old / kBlock), gen_->subkey_.data());
  }

  const KeystreamGenerator* gen_;
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce_{};
  mutable std::vector<std::uint8_t> bytes_;
};

inline Keystream KeystreamGenerator::Stream(std::uint64_t index) const {
  return Keystream(*this, index);
}

// `needed` keystream bits of stream `stream` starting at `offset`.
inline BitStream ExtendKeystream(const StegoKey& key, std::size_t needed,
                                 std::uint64_t stream = 0,
                                 std::size_t offset = 0) {
  return KeystreamGenerator(key).Stream(stream).Take(offset, needed);
}

inline constexpr std::size_t kDerivedNonceBytes = 12;

// Deterministic per-message nonce: keyed BLAKE2b over (seed, message).
// Distinct messages or seeds under one key get distinct nonces.
inline std::vector<std::uint8_t> DeriveNonce(
    std::span<const std::uint8_t> key, std::uint64_t seed,
    std::span<const std::uint8_t> message) {
  InitSodium();
  std::array<std::uint8_t, crypto_generichash_KEYBYTES_MAX> mac_key{};
  std::size_t mac_key_len = std::min(key.size(), mac_key.size());
  if (key.size() > mac_key.size()) {
    crypto_generichash(mac_key.data(), mac_key.size(), key.data(), key.size(),
                       nullptr, 0);
  } else {
    std::copy(key.begin(), key.end(), mac_key.begin());
  }
  static constexpr std::string_view kLabel = "semsteg/nonce/v1";
  std::array<std::uint8_t, 8> seed_bytes{};
  for (std::size_t i = 0; i < 8; ++i) {
    seed_bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  }
  crypto_generichash_state state;
  crypto_generichash_init(&state, mac_key_len ? mac_key.data() : nullptr,
                          mac_key_len, crypto_generichash_BYTES_MIN);
  crypto_generichash_update(
      &state, reinterpret_cast<const unsigned char*>(kLabel.data()),
      kLabel.size());
  crypto_generichash_update(&state, seed_bytes.data(), seed_bytes.size());
  crypto_generichash_update(&state, message.data(), message.size());
  std::vector<std::uint8_t> nonce(crypto_generichash_BYTES_MIN);
  crypto_generichash_final(&state, nonce.data(), nonce.size());
  nonce.resize(kDerivedNonceBytes);
  sodium_memzero(mac_key.data(), mac_key.size());
  return nonce;
}

// cipher XOR keystream. An involution for a fixed (key, nonce, stream).
inline BitStream Randomize(const BitStream& cipher, const StegoKey& key,
                           std::uint64_t stream = 0) {
  KeystreamGenerator gen(key);
  Keystream ks = gen.Stream(stream);
  BitStream out;
  for (std::size_t i = 0; i < cipher.size(); ++i) {
    out.push_back(cipher[i] != ks.bit(i));
  }
  return out;
}

inline BitStream Derandomize(const BitStream& random_bits, const StegoKey& key,
                             std::uint64_t stream = 0) {
  return Randomize(random_bits, key, stream);
}

// 16-bit message bit length (MSB first) followed by the message bits.
inline BitStream FrameMessage(std::span<const std::uint8_t> message) {
  if (message.size() > kMaxMessageBytes) {
    throw Error(ErrorCode::kMessageTooLong,
                std::to_string(message.size()) + " bytes exceeds " +
                    std::to_string(kMaxMessageBytes));
  }
  const auto length_bits = static_cast<std::uint32_t>(message.size() * 8);
  BitStream framed;
  for (int k = static_cast<int>(kHeaderBits) - 1; k >= 0; --k) {
    framed.push_back(((length_bits >> k) & 1) != 0);
  }
  framed.Append(BitStream::FromBytes(message));
  return framed;
}

// Declared message length in bits, read from the header.
inline std::size_t FramedLengthBits(const BitStream& framed) {
  if (framed.size() < kHeaderBits) {
    throw Error(ErrorCode::kTruncatedMessage,
                "only " + std::to_string(framed.size()) +
                    " bits recovered, header needs " +
                    std::to_string(kHeaderBits));
  }
  std::size_t length = 0;
  for (std::size_t i = 0; i < kHeaderBits; ++i) {
    length = (length << 1) | (framed[i] ? 1u : 0u);
  }
  return length;
}

// Strips the header and any padding beyond the declared length.
inline std::vector<std::uint8_t> UnframeMessage(const BitStream& framed) {
  const std::size_t length = FramedLengthBits(framed);
  if (length % 8 != 0) {
    throw Error(ErrorCode::kCorruptMessage,
                "declared length " + std::to_string(length) +
                    " bits is not a whole number of bytes");
  }
  if (framed.size() < kHeaderBits + length) {
    throw Error(ErrorCode::kTruncatedMessage,
                "header declares " + std::to_string(length) + " bits, only " +
                    std::to_string(framed.size() - kHeaderBits) +
                    " recovered");
  }
  return framed.Slice(kHeaderBits, length).ToBytes();
}

}  // namespace semsteg

#endif  // SEMSTEG_CRYPTO_H_
