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

#ifndef SEMSTEG_UNICODE_H_
#define SEMSTEG_UNICODE_H_

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semsteg/error.h"

namespace semsteg::unicode {

// Decodes the code point starting at byte offset `i`; advances `i`.
// Ill-formed sequences decode as U+FFFD one byte at a time.
inline char32_t NextCodePoint(std::string_view s, std::size_t& i) {
  UChar32 c;
  int32_t pos = static_cast<int32_t>(i);
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos,
          static_cast<int32_t>(s.size()), c);
  i = static_cast<std::size_t>(pos);
  return c < 0 ? U'\uFFFD' : static_cast<char32_t>(c);
}

// Decodes the code point ending just before byte offset `i`.
inline char32_t PrevCodePoint(std::string_view s, std::size_t i) {
  UChar32 c;
  int32_t pos = static_cast<int32_t>(i);
  U8_PREV(reinterpret_cast<const uint8_t*>(s.data()), 0, pos, c);
  return c < 0 ? U'\uFFFD' : static_cast<char32_t>(c);
}

inline bool IsValidUtf8(std::string_view s) {
  int32_t pos = 0;
  const auto n = static_cast<int32_t>(s.size());
  while (pos < n) {
    UChar32 c;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos, n, c);
    if (c < 0) return false;
  }
  return true;
}

inline bool IsSpace(char32_t c) {
  if (c < 0x80) return c == ' ' || (c >= '\t' && c <= '\r');
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

// Letters and digits of space-delimited scripts. Ideographic and kana
// characters are not word characters, so surfaces in those scripts match
// without word boundaries.
inline bool IsWordChar(char32_t c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
  }
  const auto cp = static_cast<UChar32>(c);
  if (u_hasBinaryProperty(cp, UCHAR_IDEOGRAPHIC)) return false;
  const auto script = static_cast<UScriptCode>(
      u_getIntPropertyValue(cp, UCHAR_SCRIPT));
  if (script == USCRIPT_HIRAGANA || script == USCRIPT_KATAKANA ||
      script == USCRIPT_HAN || script == USCRIPT_THAI) {
    return false;
  }
  return u_isalnum(cp) || u_charType(cp) == U_NON_SPACING_MARK;
}

// Splits on Unicode whitespace.
inline std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  std::size_t start = std::string_view::npos;
  while (i < text.size()) {
    const std::size_t at = i;
    const char32_t c = NextCodePoint(text, i);
    if (IsSpace(c)) {
      if (start != std::string_view::npos) {
        tokens.push_back(text.substr(start, at - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = at;
    }
  }
  if (start != std::string_view::npos) tokens.push_back(text.substr(start));
  return tokens;
}

// NFC normalization followed by full case folding.
inline std::string FoldToken(std::string_view token) {
  bool ascii = true;
  for (unsigned char ch : token) {
    if (ch >= 0x80) {
      ascii = false;
      break;
    }
  }
  std::string out;
  if (ascii) {
    out.reserve(token.size());
    for (unsigned char ch : token) {
      out.push_back(
          static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch - 'A' + 'a' : ch));
    }
    return out;
  }
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInternal, "ICU NFC normalizer unavailable");
  }
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(token.data(), static_cast<int32_t>(token.size())));
  s.foldCase();
  // Folding can denormalize (e.g. U+0345), so normalize after as well.
  icu::UnicodeString normalized = nfc->normalize(s, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInternal, "ICU normalization failed");
  }
  normalized.toUTF8String(out);
  return out;
}

// The matching form of a text: whitespace runs collapsed to one ASCII
// space, no leading/trailing whitespace, each token folded.
inline std::string Fold(std::string_view text) {
  std::string out;
  for (std::string_view token : SplitWhitespace(text)) {
    if (!out.empty()) out.push_back(' ');
    out += FoldToken(token);
  }
  return out;
}

}  // namespace semsteg::unicode

#endif  // SEMSTEG_UNICODE_H_
