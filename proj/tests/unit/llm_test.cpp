// Copyright 2026 The TraceSpec Authors
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

#include <atomic>
#include <cstdlib>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "fixtures.hpp"
#include "tracespec/core/error.hpp"
#include "tracespec/llm/backend.hpp"
#include "tracespec/llm/gateway.hpp"
#include "tracespec/llm/parse.hpp"
#include "tracespec/llm/prompts.hpp"

namespace tracespec::llm {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kConfigError;
}

TEST(Prompts, TaskNames) {
  ASSERT_EQ(dataset_tasks().size(), 11u);
  for (TaskKind t : dataset_tasks()) {
    EXPECT_EQ(task_kind_from_string(to_string(t)), t);
    EXPECT_TRUE(is_dataset_task(t));
  }
  EXPECT_FALSE(is_dataset_task(TaskKind::kJudgeReview));
  EXPECT_EQ(kind_of([] { task_kind_from_string("nope"); }), ErrorKind::kUnknownTask);
}

TEST(Prompts, MatchesGoldenTranscripts) {
  Json contexts = Json::parse(fixtures::slurp(fixtures::test_dir() / "golden" / "contexts.json"));
  for (TaskKind t : dataset_tasks()) {
    std::string name(to_string(t));
    PromptContext ctx;
    for (auto& [k, v] : contexts.at(name).items()) ctx[k] = v.get<std::string>();
    auto msgs = render(t, ctx);
    ASSERT_EQ(msgs.size(), 2u);
    EXPECT_EQ(msgs[0].role, Role::kSystem);
    EXPECT_EQ(msgs[0].content,
              fixtures::slurp(fixtures::test_dir() / "golden" / (name + ".system.txt")))
        << name;
    EXPECT_EQ(msgs[1].content,
              fixtures::slurp(fixtures::test_dir() / "golden" / (name + ".user.txt")))
        << name;
  }
}

TEST(Prompts, MissingPlaceholderNamesKey) {
  try {
    render(TaskKind::kArDecomposition, {{"problem_description", "x"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingPlaceholder);
    EXPECT_NE(std::string(e.what()).find("signature"), std::string::npos);
  }
}

TEST(Prompts, SubstitutionLeavesForeignBraces) {
  EXPECT_EQ(substitute("{a} {b} {c", {{"a", "{b}"}, {"b", "B"}}), "{b} B {c");
  EXPECT_EQ(substitute("{a} {not a name} {}", {{"a", "1"}}), "1 {not a name} {}");
  EXPECT_EQ(substitute("q={s:.2f}", {{"s", "0.8333333"}}), "q=0.83");
  EXPECT_EQ(placeholders("{a} {b} {a}"), (std::vector<std::string>{"a", "b"}));
}

TEST(Parse, FieldedRoundTrip) {
  Fields f{{"precond", "(> (len xs) 0)"}, {"postcond", "line1\n\nline3"}, {"empty", ""}};
  EXPECT_EQ(parse_fielded(format_fielded(f)), f);
  auto text = format_fielded(f) + "\ntrailing chatter";
  EXPECT_EQ(parse_fielded(text), f);
  ASSERT_NE(find_field(f, "postcond"), nullptr);
  EXPECT_EQ(find_field(f, "nope"), nullptr);
}

TEST(Parse, FieldedErrors) {
  EXPECT_EQ(kind_of([] { parse_fielded("[[ ## a ## ]]\nx\n"); }),
            ErrorKind::kMissingCompletedMarker);
  EXPECT_EQ(kind_of([] { parse_fielded("[[ ## a ## ]]\nx\n[[ ## a ## ]]\ny\n[[ ## completed ## ]]"); }),
            ErrorKind::kDuplicateField);
}

TEST(Parse, StructuredBlock) {
  auto j = parse_structured_block("blah\n```json\n[{\"a\": 1}]\n```\n```json\n2\n```");
  EXPECT_EQ(j, Json::parse("[{\"a\":1}]"));
  EXPECT_EQ(kind_of([] { parse_structured_block("no block"); }), ErrorKind::kNoBlockFound);
  try {
    parse_structured_block("```json\n{\"a\": }\n```");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDecodeError);
    EXPECT_NE(std::string(e.what()).find("at byte 7"), std::string::npos) << e.what();
  }
  EXPECT_EQ(fenced_block("```text\na\n```\n```lean\nb\n```", "lean"), std::optional<std::string>("b"));
  EXPECT_EQ(fenced_block("```text\na\n```", "lean"), std::nullopt);
}

TEST(Scripted, OrdinalsAndExhaustion) {
  auto recs = ScriptedBackend::parse(
      "{\"task\":\"test_mapping\",\"ordinal\":1,\"response_text\":\"second\"}\n"
      "\n"
      "{\"task\":\"test_mapping\",\"ordinal\":0,\"response_text\":\"first\"}\n"
      "{\"task\":\"test_mapping\",\"problem\":\"p2\",\"response_text\":\"other\"}\n");
  ScriptedBackend b(recs);
  CallTag tag{TaskKind::kTestMapping, "p1"};
  EXPECT_EQ(b.complete({}, {}, tag).text, "first");
  EXPECT_EQ(b.complete({}, {}, tag).text, "second");
  EXPECT_EQ(kind_of([&] { b.complete({}, {}, tag); }), ErrorKind::kScriptExhausted);
  EXPECT_EQ(b.complete({}, {}, CallTag{TaskKind::kTestMapping, "p2"}).text, "other");
  EXPECT_EQ(b.remaining(), 0u);
}

TEST(Gateway, TruncationRaisesTokenLimit) {
  auto backend = std::make_shared<FunctionBackend>(
      [](const std::vector<ChatMessage>&, const CallTag&) { return Completion{"partial", true}; });
  Gateway gw(backend, {});
  EXPECT_TRUE(gw.complete({}, {}).truncated);
  EXPECT_EQ(kind_of([&] {
              gw.ask(TaskKind::kArDecomposition, "p",
                     {{"problem_description", "d"}, {"signature", "s"}});
            }),
            ErrorKind::kTokenLimit);
}

TEST(Gateway, ObserverSeesRenderedMessages) {
  auto backend = std::make_shared<FunctionBackend>(
      [](const std::vector<ChatMessage>& m, const CallTag&) {
        return Completion{"echo:" + std::to_string(m.size()), false};
      });
  Gateway gw(backend, {});
  std::vector<Exchange> seen;
  gw.set_observer([&](const Exchange& e) { seen.push_back(e); });
  PromptContext ctx{{"problem_description", "d"}, {"signature", "s"}};
  EXPECT_EQ(gw.ask(TaskKind::kArDecomposition, "p", ctx), "echo:2");
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].messages, render(TaskKind::kArDecomposition, ctx));
  EXPECT_EQ(seen[0].tag.problem_id, "p");
}

TEST(Params, Validation) {
  CompletionParams p;
  EXPECT_NO_THROW(p.validate());
  p.temperature = -1;
  EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::kConfigError);
  p = {};
  p.max_tokens = 0;
  EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::kConfigError);
}

class LocalServer : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/chat", [this](const httplib::Request& req, httplib::Response& res) {
      int n = ++hits_;
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      if (n <= fail_first_) {
        res.status = 503;
        res.set_content("busy", "text/plain");
        return;
      }
      Json reply = {{"choices",
                     {{{"message", {{"role", "assistant"}, {"content", "hi"}}},
                       {"finish_reason", finish_}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  RemoteConfig config() {
    RemoteConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat";
    c.timeout = std::chrono::seconds(5);
    c.backoff = std::chrono::milliseconds(1);
    return c;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  int fail_first_ = 0;
  std::string finish_ = "stop";
  std::string last_auth_;
  std::string last_body_;
};

TEST_F(LocalServer, WireShape) {
  ::setenv("TRACESPEC_TEST_KEY", "sekret", 1);
  auto c = config();
  c.auth_env = "TRACESPEC_TEST_KEY";
  RemoteBackend b(c);
  CompletionParams p;
  p.model_id = "m1";
  auto out = b.complete({{Role::kSystem, "s"}, {Role::kUser, "u"}}, p, {});
  EXPECT_EQ(out.text, "hi");
  EXPECT_FALSE(out.truncated);
  EXPECT_EQ(last_auth_, "Bearer sekret");
  Json body = Json::parse(last_body_);
  EXPECT_EQ(body["model"], "m1");
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_EQ(body["max_tokens"], 10000);
}

TEST_F(LocalServer, LengthFinishMarksTruncated) {
  finish_ = "length";
  RemoteBackend b(config());
  EXPECT_TRUE(b.complete({}, {}, {}).truncated);
}

TEST_F(LocalServer, RetriesTransientFailures) {
  fail_first_ = 2;
  auto c = config();
  c.attempts = 3;
  RemoteBackend b(c);
  EXPECT_EQ(b.complete({}, {}, {}).text, "hi");
  EXPECT_EQ(hits_.load(), 3);
}

TEST_F(LocalServer, GivesUpAfterAttempts) {
  fail_first_ = 5;
  auto c = config();
  c.attempts = 2;
  RemoteBackend b(c);
  EXPECT_EQ(kind_of([&] { b.complete({}, {}, {}); }), ErrorKind::kTransportError);
  EXPECT_EQ(hits_.load(), 2);
}

TEST(Remote, RejectsBadEndpoint) {
  RemoteConfig c;
  c.endpoint = "ftp://x";
  EXPECT_EQ(kind_of([&] { RemoteBackend b(c); }), ErrorKind::kConfigError);
}

TEST(Remote, MissingSecretIsConfigError) {
  RemoteConfig c;
  c.endpoint = "http://127.0.0.1:9/x";
  c.auth_env = "TRACESPEC_SURELY_UNSET_VAR";
  RemoteBackend b(c);
  EXPECT_EQ(kind_of([&] { b.complete({}, {}, {}); }), ErrorKind::kConfigError);
}

}  // namespace
}  // namespace tracespec::llm
