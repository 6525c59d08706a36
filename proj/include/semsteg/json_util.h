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

#ifndef SEMSTEG_JSON_UTIL_H_
#define SEMSTEG_JSON_UTIL_H_

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "semsteg/error.h"

namespace semsteg::json_util {

using Json = nlohmann::json;

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to '" + path + "'");
}

// Parses JSON text; syntax errors report the 1-based line.
inline Json Parse(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < limit; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw Error(ErrorCode::kParse,
                source + ":" + std::to_string(line) + ": " + e.what());
  }
}

// Typed field access; failures name the field.
template <typename T>
T Field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw Error(ErrorCode::kParse, where + ": missing field '" + key + "'");
  }
  try {
    return object.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kParse,
                where + ": field '" + key + "' has the wrong type");
  }
}

inline void CheckVersion(const Json& doc, const std::string& where) {
  if (Field<int>(doc, "version", where) != 1) {
    throw Error(ErrorCode::kParse, where + ": unsupported version");
  }
}

}  // namespace semsteg::json_util

#endif  // SEMSTEG_JSON_UTIL_H_
