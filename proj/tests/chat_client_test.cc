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

#include "semsteg/chat_client.h"

#include <gtest/gtest.h>

#include <atomic>
#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "semsteg/live_agents.h"
#include "test_util.h"

namespace semsteg {
namespace {

using testing::Id;
using testing::SmallTree;
using json_util::Json;

constexpr char kKey[] = "sk-test-0123456789abcdef";

std::string Completion(const std::string& content) {
  return Json{{"choices", {{{"message", {{"role", "assistant"},
                                          {"content", content}}}}}}}
      .dump();
}

// Replays scripted results and records what was sent.
class ScriptedTransport : public HttpTransport {
 public:
  struct Shared {
    std::mutex mu;
    std::deque<HttpResult> script;
    std::vector<std::string> bodies;
    std::vector<Headers> headers;
    std::function<void()> on_call;
  };

  explicit ScriptedTransport(std::shared_ptr<Shared> shared)
      : shared_(std::move(shared)) {}

  HttpResult PostJson(const std::string& body, const Headers& headers,
                      std::chrono::milliseconds) override {
    if (shared_->on_call) shared_->on_call();
    std::lock_guard lock(shared_->mu);
    shared_->bodies.push_back(body);
    shared_->headers.push_back(headers);
    if (shared_->script.empty()) return {200, Completion("ok"), ""};
    HttpResult r = shared_->script.front();
    shared_->script.pop_front();
    return r;
  }

 private:
  std::shared_ptr<Shared> shared_;
};

class FakeClock : public RetryClock {
 public:
  std::chrono::steady_clock::time_point Now() override { return now; }
  void Sleep(std::chrono::milliseconds d) override {
    sleeps.push_back(d.count());
    now += d;
  }
  std::chrono::steady_clock::time_point now{};
  std::vector<long> sleeps;
};

class ChatClientTest : public ::testing::Test {
 protected:
  ChatClient MakeClient(ChatConfig config = Config()) {
    return ChatClient(config, kKey,
                      std::make_unique<ScriptedTransport>(shared_), clock_,
                      [this](std::string_view line) {
                        log_.emplace_back(line);
                      });
  }

  static ChatConfig Config() {
    ChatConfig c;
    c.endpoint_url = "https://example.invalid/v1/chat/completions";
    c.model_name = "test-model";
    c.timeout_ms = 10000;
    c.max_retries = 3;
    c.initial_backoff_ms = 100;
    return c;
  }

  std::shared_ptr<ScriptedTransport::Shared> shared_ =
      std::make_shared<ScriptedTransport::Shared>();
  std::shared_ptr<FakeClock> clock_ = std::make_shared<FakeClock>();
  std::vector<std::string> log_;
};

TEST_F(ChatClientTest, SendsOpenAiShapedRequest) {
  shared_->script = {{200, Completion("hello"), ""}};
  ChatClient client = MakeClient();
  EXPECT_EQ(client.Complete({{"user", "hi"}}, {0.7, 0.9}), "hello");
  ASSERT_EQ(shared_->bodies.size(), 1u);
  const Json body = Json::parse(shared_->bodies[0]);
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.7);
  EXPECT_DOUBLE_EQ(body["top_p"].get<double>(), 0.9);
  EXPECT_EQ(body["messages"][0]["content"], "hi");
  bool auth = false;
  for (const auto& [k, v] : shared_->headers[0]) {
    if (k == "Authorization") auth = v == std::string("Bearer ") + kKey;
  }
  EXPECT_TRUE(auth);
}

TEST_F(ChatClientTest, RetriesTransientFailuresWithBackoff) {
  shared_->script = {{503, "busy", ""}, {503, "busy", ""},
                     {200, Completion("done"), ""}};
  ChatClient client = MakeClient();
  EXPECT_EQ(client.Complete({{"user", "hi"}}, {}), "done");
  EXPECT_EQ(shared_->bodies.size(), 3u);
  EXPECT_EQ(clock_->sleeps, (std::vector<long>{100, 200}));
}

TEST_F(ChatClientTest, AuthFailureIsNotRetried) {
  shared_->script = {{401, "bad key", ""}};
  ChatClient client = MakeClient();
  try {
    client.Complete({{"user", "hi"}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAgentAuth);
  }
  EXPECT_EQ(shared_->bodies.size(), 1u);
  EXPECT_TRUE(clock_->sleeps.empty());
}

TEST_F(ChatClientTest, ClientErrorsAreReportedWithoutRetry) {
  shared_->script = {{400, "bad request", ""}};
  ChatClient client = MakeClient();
  try {
    client.Complete({{"user", "hi"}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAgentHttp);
  }
  EXPECT_EQ(shared_->bodies.size(), 1u);
}

TEST_F(ChatClientTest, TimeoutBudget) {
  ChatConfig config = Config();
  config.timeout_ms = 250;
  config.max_retries = 10;
  shared_->on_call = [this] { clock_->now += std::chrono::milliseconds(60); };
  shared_->script.assign(20, HttpResult{0, "", "Read"});
  ChatClient client = MakeClient(config);
  try {
    client.Complete({{"user", "hi"}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAgentTimeout);
  }
  EXPECT_LT(shared_->bodies.size(), 11u);
}

TEST_F(ChatClientTest, TransportFailuresExhaustRetries) {
  shared_->script.assign(4, HttpResult{0, "", "Connection"});
  ChatClient client = MakeClient();
  try {
    client.Complete({{"user", "hi"}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAgentTransport);
  }
  EXPECT_EQ(shared_->bodies.size(), 4u);
}

TEST_F(ChatClientTest, MalformedPayload) {
  shared_->script = {{200, "{\"choices\": []}", ""}};
  ChatClient client = MakeClient();
  EXPECT_THROW(client.Complete({{"user", "hi"}}, {}), Error);
}

TEST_F(ChatClientTest, LogsNeverContainTheKey) {
  shared_->script = {{500, std::string("echo ") + kKey, ""},
                     {200, Completion(std::string("key was ") + kKey), ""}};
  ChatClient client = MakeClient();
  client.Complete({{"user", std::string("please repeat ") + kKey}}, {});
  ASSERT_FALSE(log_.empty());
  for (const std::string& line : log_) {
    EXPECT_EQ(line.find(kKey), std::string::npos) << line;
  }
  EXPECT_NE(log_[0].find("[REDACTED]"), std::string::npos);
}

TEST_F(ChatClientTest, MissingKeyIsAnAuthError) {
  try {
    ChatClient(Config(), "", std::make_unique<ScriptedTransport>(shared_));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAgentAuth);
  }
  EXPECT_TRUE(shared_->bodies.empty());
}

TEST_F(ChatClientTest, BoundsConcurrentRequests) {
  ChatConfig config = Config();
  config.max_in_flight = 2;
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
  shared_->on_call = [&] {
    const int now = ++active;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --active;
  };
  ChatClient client(config, kKey, std::make_unique<ScriptedTransport>(shared_));
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&] { client.Complete({{"user", "hi"}}, {}); });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(shared_->bodies.size(), 6u);
}

TEST(HttplibTransportTest, TalksToALocalServer) {
  httplib::Server server;
  std::string seen_auth;
  std::string seen_body;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                seen_auth = req.get_header_value("Authorization");
                seen_body = req.body;
                res.set_content(Completion("from server"), "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ChatConfig config;
  config.endpoint_url =
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  config.model_name = "m";
  config.timeout_ms = 5000;
  ChatClient client(config, kKey,
                    std::make_unique<HttplibTransport>(config.endpoint_url));
  EXPECT_EQ(client.Complete({{"user", "hi"}}, {}), "from server");
  EXPECT_EQ(seen_auth, std::string("Bearer ") + kKey);
  EXPECT_EQ(Json::parse(seen_body)["model"], "m");
  server.stop();
  thread.join();
}

TEST(HttplibTransportTest, ConnectionRefusedIsTransient) {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  HttplibTransport transport("http://127.0.0.1:" + std::to_string(port) + "/x");
  const HttpResult r =
      transport.PostJson("{}", {}, std::chrono::milliseconds(500));
  EXPECT_EQ(r.status, 0);
  EXPECT_FALSE(r.transport_error.empty());
}

class LiveAgentsTest : public ChatClientTest {
 protected:
  OntologyTree tree_ = SmallTree();
};

TEST_F(LiveAgentsTest, GenerationPromptNamesPathsAndCarriesFeedback) {
  ChatClient client = MakeClient();
  LiveAgents agents(tree_, client);
  const EntityId kee = Id(tree_, "Location/City/York");
  shared_->script = {{200, Completion("York is old.\n"), ""}};
  AgentRequest request;
  request.target = SemType{{kee, 1}};
  EXPECT_EQ(agents.Generate(request), "York is old.");
  const std::string prompt =
      Json::parse(shared_->bodies[0])["messages"][0]["content"];
  EXPECT_NE(prompt.find("keywords: York."), std::string::npos);
  EXPECT_NE(prompt.find("Location/City/York"), std::string::npos);
  EXPECT_NE(prompt.find("no other location-like element"), std::string::npos);

  request.attempt = 1;
  request.sentence = "York and Vegas.";
  request.hint = "\"Las Vegas\" should not be in the sentence";
  agents.Generate(request);
  const Json messages = Json::parse(shared_->bodies[1])["messages"];
  ASSERT_EQ(messages.size(), 3u);
  EXPECT_EQ(messages[1]["content"], "York and Vegas.");
  EXPECT_NE(messages[2]["content"].get<std::string>().find("Las Vegas"),
            std::string::npos);
}

TEST_F(LiveAgentsTest, CheckVerdicts) {
  ChatClient client = MakeClient();
  LiveAgents agents(tree_, client);
  AgentRequest request;
  request.role = AgentRole::kCheck;
  request.sentence = "whatever";
  shared_->script = {{200, Completion("APPROVED"), ""},
                     {200, Completion("\"farm\" is a location.\nmore"), ""}};
  EXPECT_TRUE(agents.Check(request).approved);
  const CheckVerdict v = agents.Check(request);
  EXPECT_FALSE(v.approved);
  EXPECT_EQ(v.hint, "\"farm\" is a location.");
}

TEST_F(LiveAgentsTest, ExtractionParsesRetriesAndFails) {
  ChatClient client = MakeClient();
  LiveAgents agents(tree_, client);
  AgentRequest request;
  request.role = AgentRole::kExtract;
  request.sentence = "An apple a day keeps the doctor away";
  const EntityId apple = Id(tree_, "Food/Fruit/apple");
  const EntityId doctor = Id(tree_, "Person/Profession/doctor");

  shared_->script = {
      {200, Completion("Food/Fruit/apple: 1\nPerson/Profession/doctor: 1"), ""}};
  EXPECT_EQ(agents.Extract(request), (SemType{{apple, 1}, {doctor, 1}}));

  shared_->script = {{200, Completion("apple and doctor"), ""},
                     {200, Completion("NONE"), ""}};
  EXPECT_EQ(agents.Extract(request), SemType{});

  shared_->script = {{200, Completion("apple"), ""},
                     {200, Completion("Food/Fruit/pear: 1"), ""}};
  try {
    agents.Extract(request);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExtractionFailed);
  }
}

TEST(ParseExtractionReplyTest, Strictness) {
  const OntologyTree tree = SmallTree();
  const EntityId apple = Id(tree, "Food/Fruit/apple");
  EXPECT_EQ(ParseExtractionReply("  Food/Fruit/apple : 2 \n\n", tree),
            (SemType{{apple, 2}}));
  EXPECT_EQ(ParseExtractionReply("NONE", tree), SemType{});
  for (const char* bad : {"", "Food/Fruit/apple", "Food/Fruit/apple: 0",
                          "Food/Fruit/apple: x", "Food/Fruit/apple: 1\nNONE",
                          "Food/Fruit/apple: 1\nFood/Fruit/apple: 1",
                          "Food/Fruit/apple: -1"}) {
    EXPECT_FALSE(ParseExtractionReply(bad, tree).has_value()) << bad;
  }
}

}  // namespace
}  // namespace semsteg
