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

// Drives the semsteg binary as an operator would.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <httplib.h>
#include <string>
#include <thread>

#include "semsteg/json_util.h"

namespace semsteg {
namespace {

namespace fs = std::filesystem;
using json_util::Json;

constexpr const char* kKeyHex = "8f1e6c0a2b3d4e5f60718293a4b5c6d7e8f90a1b2c3d4e5f";

struct CmdResult {
  int code = -1;
  std::string out;  // stdout and stderr together
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("semsteg_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::setenv("SEMSTEG_KEY", kKeyHex, 1);
    ::unsetenv("SEMSTEG_NONCE");
    ::unsetenv("SEMSTEG_API_KEY");
  }

  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  CmdResult Sh(const std::string& args) const {
    const std::string cmd = std::string(SEMSTEG_BIN) + " " + args + " 2>&1";
    CmdResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string MockConfig() const {
    const std::string path = P("config.json");
    json_util::WriteFile(path, Json{{"version", 1},
                                    {"tree", std::string(SEMSTEG_DATA_DIR) + "/tree.json"},
                                    {"distribution",
                                     std::string(SEMSTEG_DATA_DIR) + "/distribution.json"},
                                    {"mode", "mock"},
                                    {"seed", 11},
                                    {"mock", {{"fault_rate", 0.3}}}}
                                   .dump());
    return "--config " + path;
  }

  void WriteMessage(const std::string& name, std::size_t n) const {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>(i * 37 + 5));
    json_util::WriteFile(P(name), s);
  }

  fs::path dir_;
};

TEST_F(CliTest, BuildDistMatchesHandCounts) {
  json_util::WriteFile(P("corpus.txt"),
                       "I ate an apple in Vegas.\n"
                       "The doctor ate an apple.\n"
                       "Nothing to see here.\n"
                       "An apple a day keeps the doctor away.\n");
  const CmdResult r = Sh("--tree " + std::string(SEMSTEG_DATA_DIR) +
                   "/tree.json build-dist " + P("corpus.txt") + " " + P("d.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("support 3"), std::string::npos) << r.out;
  const Json d = Json::parse(json_util::ReadFile(P("d.json")));
  EXPECT_EQ(d["total"], 4);
  std::map<std::string, int> counts;
  for (const Json& e : d["entries"]) counts[e["type"].dump()] = e["count"];
  EXPECT_EQ(counts["{}"], 1);
  EXPECT_EQ((counts[R"({"Food/Fruit/apple":1,"Person/Profession/doctor":1})"]), 2);
  EXPECT_EQ((counts[R"({"Food/Fruit/apple":1,"Location/Tourism Location/Las Vegas":1})"]),
            1);
}

TEST_F(CliTest, BuildDistRejectsEmptyAndMalformedCorpora) {
  const std::string tree = "--tree " + std::string(SEMSTEG_DATA_DIR) + "/tree.json";
  json_util::WriteFile(P("empty.txt"), "");
  EXPECT_EQ(Sh(tree + " build-dist " + P("empty.txt") + " " + P("d.json")).code, 2);
  json_util::WriteFile(P("bad.txt"), "fine line\nbroken \xff\xfe line\n");
  const CmdResult r = Sh(tree + " build-dist " + P("bad.txt") + " " + P("d.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find(":2:"), std::string::npos) << r.out;
  EXPECT_EQ(Sh(tree + " build-dist " + P("missing.txt") + " " + P("d.json")).code, 2);
}

TEST_F(CliTest, EncodeDecodeRoundTripIsByteIdenticalAndDeterministic) {
  const std::string cfg = MockConfig();
  WriteMessage("msg.bin", 120);
  const CmdResult enc = Sh(cfg + " encode " + P("msg.bin") + " " + P("stego.txt") +
                     " --trace-out " + P("trace.json"));
  ASSERT_EQ(enc.code, 0) << enc.out;
  EXPECT_NE(enc.out.find("bits/sentence"), std::string::npos);
  const CmdResult dec = Sh(cfg + " decode " + P("stego.txt") + " " + P("out.bin"));
  ASSERT_EQ(dec.code, 0) << dec.out;
  EXPECT_EQ(json_util::ReadFile(P("out.bin")), json_util::ReadFile(P("msg.bin")));

  ASSERT_EQ(Sh(cfg + " encode " + P("msg.bin") + " " + P("stego2.txt")).code, 0);
  EXPECT_EQ(json_util::ReadFile(P("stego.txt")), json_util::ReadFile(P("stego2.txt")));
  ASSERT_EQ(Sh(cfg + " --seed 12 encode " + P("msg.bin") + " " + P("stego3.txt")).code,
            0);
  EXPECT_NE(json_util::ReadFile(P("stego.txt")), json_util::ReadFile(P("stego3.txt")));

  WriteMessage("empty.bin", 0);
  ASSERT_EQ(Sh(cfg + " encode " + P("empty.bin") + " " + P("e.txt")).code, 0);
  ASSERT_EQ(Sh(cfg + " decode " + P("e.txt") + " " + P("e.out")).code, 0);
  EXPECT_EQ(json_util::ReadFile(P("e.out")), "");
}

TEST_F(CliTest, WrongKeyOrEditedFileExitsFive) {
  const std::string cfg = MockConfig();
  WriteMessage("msg.bin", 40);
  ASSERT_EQ(Sh(cfg + " encode " + P("msg.bin") + " " + P("stego.txt")).code, 0);
  ::setenv("SEMSTEG_KEY", "00000000000000000000000000000000000000000000", 1);
  const CmdResult wrong = Sh(cfg + " decode " + P("stego.txt") + " " + P("out.bin"));
  EXPECT_EQ(wrong.code, 5) << wrong.out;
  EXPECT_FALSE(fs::exists(P("out.bin")));
  ::setenv("SEMSTEG_KEY", kKeyHex, 1);

  // Drop the last sentence but keep the declared count.
  std::string text = json_util::ReadFile(P("stego.txt"));
  text.erase(text.rfind('\n', text.size() - 2) + 1);
  json_util::WriteFile(P("cut.txt"), text);
  const CmdResult cut = Sh(cfg + " decode " + P("cut.txt") + " " + P("out.bin"));
  EXPECT_EQ(cut.code, 5) << cut.out;

  // A type longer than any class in the distribution is flagged per
  // sentence.
  text = json_util::ReadFile(P("stego.txt"));
  const std::size_t first = text.find('\n') + 1;
  text.replace(first, text.find('\n', first) - first, "Paris, Paris, Paris, Paris, Paris and Paris.");
  json_util::WriteFile(P("edit.txt"), text);
  const CmdResult edit = Sh(cfg + " decode " + P("edit.txt") + " " + P("out.bin"));
  EXPECT_EQ(edit.code, 5) << edit.out;
  EXPECT_NE(edit.out.find("sentence 0: unknown"), std::string::npos) << edit.out;
}

TEST_F(CliTest, SingleClassDistributionExitsThree) {
  json_util::WriteFile(P("one.json"),
                       R"({"version":1,"total":3,"max_type_len":4,"entries":[)"
                       R"({"type":{"Food/Fruit/apple":1},"count":3}]})");
  WriteMessage("msg.bin", 4);
  const CmdResult r = Sh(MockConfig() + " --dist " + P("one.json") + " encode " +
                   P("msg.bin") + " " + P("s.txt"));
  EXPECT_EQ(r.code, 3) << r.out;
}

TEST_F(CliTest, LiveModeWithoutApiKeyExitsFourBeforeAnyRequest) {
  httplib::Server server;
  int hits = 0;
  server.Post(".*", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.set_content("{}", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string cfg = P("live.json");
  json_util::WriteFile(
      cfg, Json{{"version", 1},
                {"tree", std::string(SEMSTEG_DATA_DIR) + "/tree.json"},
                {"distribution", std::string(SEMSTEG_DATA_DIR) + "/distribution.json"},
                {"mode", "live"},
                {"live",
                 {{"endpoint_url",
                   "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions"},
                  {"model_name", "m"},
                  {"api_key_env", "SEMSTEG_API_KEY"}}}}
               .dump());
  WriteMessage("msg.bin", 4);
  const CmdResult r = Sh("--config " + cfg + " encode " + P("msg.bin") + " " + P("s.txt"));
  server.stop();
  t.join();
  EXPECT_EQ(r.code, 4) << r.out;
  EXPECT_EQ(hits, 0);
}

TEST_F(CliTest, NoKeyFlagAndNoKeyIsAConfigError) {
  const std::string cfg = MockConfig();
  WriteMessage("msg.bin", 4);
  EXPECT_EQ(Sh(cfg + " --key " + kKeyHex + " encode " + P("msg.bin") + " " +
               P("s.txt"))
                .code,
            2);
  ::unsetenv("SEMSTEG_KEY");
  EXPECT_EQ(Sh(cfg + " encode " + P("msg.bin") + " " + P("s.txt")).code, 2);
}

TEST_F(CliTest, AttackIsDeterministicAndEvalReportsBuckets) {
  const std::string cfg = MockConfig();
  const fs::path run = dir_ / "run";
  fs::create_directories(run);
  WriteMessage("msg.bin", 60);
  const CmdResult enc = Sh(cfg + " encode " + P("msg.bin") + " " + (run / "stego.txt").string() +
                     " --trace-out " + (run / "trace.json").string());
  ASSERT_EQ(enc.code, 0) << enc.out;

  for (const char* kind : {"insert", "delete", "replace", "swap"}) {
    const std::string base = cfg + " attack " + (run / "stego.txt").string() + " ";
    const std::string flags = std::string(" --kind ") + kind + " --attack-seed 9";
    ASSERT_EQ(Sh(base + P("a1.txt") + flags).code, 0);
    ASSERT_EQ(Sh(base + P("a2.txt") + flags).code, 0);
    EXPECT_EQ(json_util::ReadFile(P("a1.txt")), json_util::ReadFile(P("a2.txt")));
    EXPECT_NE(json_util::ReadFile(P("a1.txt")),
              json_util::ReadFile((run / "stego.txt").string()));
  }

  const CmdResult ev = Sh(cfg + " eval " + run.string());
  ASSERT_EQ(ev.code, 0) << ev.out;
  EXPECT_NE(ev.out.find("iterations"), std::string::npos);
  const Json report = Json::parse(json_util::ReadFile((run / "report.json").string()));
  const Json& clean = report["decoding_success_rate"]["none"];
  EXPECT_EQ(clean["overall"]["rate"], 1.0);
  for (const char* len : {"1", "2", "3", "4"}) {
    EXPECT_TRUE(clean["by_type_len"].contains(len)) << len;
  }
  for (const char* k : {"0", "1", "2", "3"}) {
    EXPECT_TRUE(report["iteration_histogram"].contains(k)) << k;
  }
  EXPECT_EQ(report["seeds"]["session"], 11);
  EXPECT_TRUE(fs::exists(run / "report.txt"));

  // Secrets never reach outputs.
  for (const auto& entry : fs::recursive_directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    EXPECT_EQ(json_util::ReadFile(entry.path().string()).find(kKeyHex),
              std::string::npos)
        << entry.path();
  }
  EXPECT_EQ(enc.out.find(kKeyHex), std::string::npos);
  EXPECT_EQ(ev.out.find(kKeyHex), std::string::npos);

  fs::remove(run / "trace.json");
  EXPECT_EQ(Sh(cfg + " eval " + run.string()).code, 2);
}

}  // namespace
}  // namespace semsteg
