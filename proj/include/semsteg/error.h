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

#ifndef SEMSTEG_ERROR_H_
#define SEMSTEG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace semsteg {

enum class ErrorCode {
  kParse,
  kValidation,
  kEmptyCorpus,
  kDeadPrefix,
  kUnknownClass,
  kNoCapacity,
  kMessageTooLong,
  kGenerationFailed,
  kExtractionFailed,
  kAgentHttp,
  kAgentAuth,
  kAgentTimeout,
  kAgentTransport,
  kTruncatedMessage,
  kCorruptMessage,
  kConfig,
  kIo,
  kInternal,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kValidation: return "validation error";
    case ErrorCode::kEmptyCorpus: return "empty corpus";
    case ErrorCode::kDeadPrefix: return "dead prefix";
    case ErrorCode::kUnknownClass: return "unknown class";
    case ErrorCode::kNoCapacity: return "no capacity";
    case ErrorCode::kMessageTooLong: return "message too long";
    case ErrorCode::kGenerationFailed: return "generation failed";
    case ErrorCode::kExtractionFailed: return "extraction failed";
    case ErrorCode::kAgentHttp: return "agent http error";
    case ErrorCode::kAgentAuth: return "agent auth error";
    case ErrorCode::kAgentTimeout: return "agent timeout";
    case ErrorCode::kAgentTransport: return "agent transport error";
    case ErrorCode::kTruncatedMessage: return "truncated message";
    case ErrorCode::kCorruptMessage: return "corrupt message";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIo: return "io error";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

// All library failures are reported as Error; code() is the category the
// CLI maps to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace semsteg

#endif  // SEMSTEG_ERROR_H_
