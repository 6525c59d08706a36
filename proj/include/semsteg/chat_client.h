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

// Chat-completions client for an OpenAI-compatible endpoint.

#ifndef SEMSTEG_CHAT_CLIENT_H_
#define SEMSTEG_CHAT_CLIENT_H_

#include <httplib.h>

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "semsteg/agents.h"
#include "semsteg/error.h"
#include "semsteg/json_util.h"

namespace semsteg {

struct ChatConfig {
  std::string endpoint_url;  // full URL of the chat-completions resource
  std::string model_name;
  std::string api_key_env = "SEMSTEG_API_KEY";
  int timeout_ms = 60000;  // budget for one call, retries included
  int max_retries = 3;
  int initial_backoff_ms = 500;
  int max_in_flight = 4;

  void Validate() const {
    if (endpoint_url.empty()) {
      throw Error(ErrorCode::kConfig, "live mode needs endpoint_url");
    }
    if (model_name.empty()) {
      throw Error(ErrorCode::kConfig, "live mode needs model_name");
    }
    if (api_key_env.empty()) {
      throw Error(ErrorCode::kConfig, "live mode needs api_key_env");
    }
    if (timeout_ms <= 0 || max_retries < 0 || initial_backoff_ms < 0 ||
        max_in_flight < 1 || max_in_flight > 64) {
      throw Error(ErrorCode::kConfig, "chat client limits out of range");
    }
  }
};

struct HttpResult {
  int status = 0;  // 0 when no response arrived
  std::string body;
  std::string transport_error;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResult PostJson(const std::string& body, const Headers& headers,
                              std::chrono::milliseconds timeout) = 0;
};

class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(const std::string& url) {
    const std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
      throw Error(ErrorCode::kConfig, "endpoint_url needs a scheme");
    }
    const std::size_t path = url.find('/', scheme + 3);
    origin_ = url.substr(0, path);
    path_ = path == std::string::npos ? "/" : url.substr(path);
  }

  HttpResult PostJson(const std::string& body, const Headers& headers,
                      std::chrono::milliseconds timeout) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(path_, h, body, "application/json");
    HttpResult out;
    if (!res) {
      out.transport_error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
  }

 private:
  std::string origin_;
  std::string path_;
};

// Time source for the retry loop; replaced in tests.
class RetryClock {
 public:
  virtual ~RetryClock() = default;
  virtual std::chrono::steady_clock::time_point Now() {
    return std::chrono::steady_clock::now();
  }
  virtual void Sleep(std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  }
};

struct ChatMessage {
  std::string role;
  std::string content;
};

using LogSink = std::function<void(std::string_view)>;

class ChatClient {
 public:
  ChatClient(ChatConfig config, std::string api_key,
             std::unique_ptr<HttpTransport> transport,
             std::shared_ptr<RetryClock> clock = std::make_shared<RetryClock>(),
             LogSink log = {})
      : config_(std::move(config)),
        api_key_(std::move(api_key)),
        transport_(std::move(transport)),
        clock_(std::move(clock)),
        log_(std::move(log)),
        in_flight_(config_.max_in_flight) {
    config_.Validate();
    if (api_key_.empty()) {
      throw Error(ErrorCode::kAgentAuth,
                  "environment variable " + config_.api_key_env +
                      " is not set");
    }
  }

  const ChatConfig& config() const { return config_; }

  // One completion. Retries 408, 429, 5xx and transport failures with
  // exponential backoff inside the timeout budget.
  std::string Complete(const std::vector<ChatMessage>& messages,
                       const SamplingParams& sampling) {
    json_util::Json body = {{"model", config_.model_name},
                 {"temperature", sampling.temperature},
                 {"top_p", sampling.top_p},
                 {"messages", json_util::Json::array()}};
    for (const ChatMessage& m : messages) {
      body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }
    const std::string payload = body.dump();
    const Headers headers = {{"Authorization", "Bearer " + api_key_},
                             {"Accept", "application/json"}};

    const auto deadline =
        clock_->Now() + std::chrono::milliseconds(config_.timeout_ms);
    auto backoff = std::chrono::milliseconds(config_.initial_backoff_ms);
    std::string last_failure;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - clock_->Now());
      if (remaining.count() <= 0) break;
      Log("request attempt=" + std::to_string(attempt) + " url=" +
          config_.endpoint_url + " headers={Authorization: Bearer [REDACTED]} body=" +
          Redact(payload));
      HttpResult res;
      {
        in_flight_.acquire();
        try {
          res = transport_->PostJson(payload, headers, remaining);
        } catch (...) {
          in_flight_.release();
          throw;
        }
        in_flight_.release();
      }
      Log("response attempt=" + std::to_string(attempt) +
          " status=" + std::to_string(res.status) +
          (res.transport_error.empty() ? "" : " error=" + res.transport_error) +
          " body=" + Redact(res.body));

      if (res.status >= 200 && res.status < 300) return ParseReply(res.body);
      if (res.status == 401 || res.status == 403) {
        throw Error(ErrorCode::kAgentAuth,
                    "endpoint rejected credentials (HTTP " +
                        std::to_string(res.status) + ")");
      }
      const bool transient = res.status == 0 || res.status == 408 ||
                             res.status == 429 || res.status >= 500;
      if (!transient) {
        throw Error(ErrorCode::kAgentHttp,
                    "HTTP " + std::to_string(res.status) + ": " +
                        Redact(res.body.substr(0, 200)));
      }
      last_failure = res.status == 0 ? res.transport_error
                                     : "HTTP " + std::to_string(res.status);
      if (clock_->Now() >= deadline) break;
      if (attempt == config_.max_retries) {
        throw Error(res.status == 0 ? ErrorCode::kAgentTransport
                                    : ErrorCode::kAgentHttp,
                    "giving up after " + std::to_string(attempt + 1) +
                        " attempts: " + last_failure);
      }
      if (clock_->Now() + backoff >= deadline) break;
      clock_->Sleep(backoff);
      backoff *= 2;
    }
    throw Error(ErrorCode::kAgentTimeout,
                "timeout budget of " + std::to_string(config_.timeout_ms) +
                    " ms exhausted" +
                    (last_failure.empty() ? "" : "; last failure: " + last_failure));
  }

 private:
  static std::string ParseReply(const std::string& body) {
    json_util::Json doc;
    try {
      doc = json_util::Json::parse(body);
      return doc.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const json_util::Json::exception& e) {
      throw Error(ErrorCode::kAgentHttp,
                  std::string("unexpected completion payload: ") + e.what());
    }
  }

  std::string Redact(std::string text) const {
    if (api_key_.empty()) return text;
    for (std::size_t at = text.find(api_key_); at != std::string::npos;
         at = text.find(api_key_, at)) {
      text.replace(at, api_key_.size(), "[REDACTED]");
    }
    return text;
  }

  void Log(const std::string& line) const {
    if (log_) log_(line);
  }

  ChatConfig config_;
  std::string api_key_;
  std::unique_ptr<HttpTransport> transport_;
  std::shared_ptr<RetryClock> clock_;
  LogSink log_;
  std::counting_semaphore<64> in_flight_;
};

}  // namespace semsteg

#endif  // SEMSTEG_CHAT_CLIENT_H_
