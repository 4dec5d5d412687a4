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

#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tracespec/cli/cli.hpp"
#include "tracespec/distill/distill.hpp"

namespace tracespec::cli {
namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args, std::atomic<bool>* cancel = nullptr) {
  args.insert(args.begin(), "tracespec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err, cancel);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> synth_args(const fixtures::TempDir& dir) {
  return {"synth",
          "--bundle", (fixtures::test_dir() / "fixtures/worked/bundle.jsonl").string(),
          "--out", (dir / "run").string(),
          "--backend", "scripted",
          "--script", fixtures::worked_script().string(),
          "--test-gen-rounds", "1"};
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, kExitConfig);
  EXPECT_EQ(call({"bogus"}).code, kExitConfig);
  EXPECT_EQ(call({"synth"}).code, kExitConfig);
  EXPECT_EQ(call({"distill", "--store", "x"}).code, kExitConfig);
  EXPECT_EQ(call({"--help"}).code, kExitOk);
}

TEST(Cli, MissingInputs) {
  fixtures::TempDir dir;
  auto r = call({"synth", "--bundle", (dir / "none.jsonl").string(), "--out",
                 (dir / "o").string(), "--backend", "scripted", "--script",
                 fixtures::worked_script().string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(call({"distill", "--store", (dir / "none").string(), "--out", (dir / "d").string()}).code,
            kExitConfig);
  EXPECT_EQ(call({"replay", "--store", (dir / "none").string()}).code, kExitConfig);
  EXPECT_EQ(call({"stats", (dir / "none.json").string()}).code, kExitConfig);
}

TEST(Cli, SynthDistillReplay) {
  fixtures::TempDir dir;
  auto r = call(synth_args(dir));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto store = dir / "run" / "trajectories.jsonl";
  ASSERT_TRUE(std::filesystem::exists(store));
  Json manifest = Json::parse(fixtures::slurp(dir / "run" / "manifest.json"));
  EXPECT_TRUE(manifest["complete"].get<bool>());
  EXPECT_EQ(manifest["problems"][0]["outcome"], "converged");
  EXPECT_EQ(manifest["problems"][0]["iterations"], 2);

  auto again = call(synth_args(dir));
  EXPECT_EQ(again.code, kExitConfig);
  auto forced_args = synth_args(dir);
  forced_args.push_back("--force");
  std::string before = fixtures::slurp(store);
  ASSERT_EQ(call(forced_args).code, kExitOk);
  EXPECT_EQ(fixtures::slurp(store), before);

  auto rp = call({"replay", "--store", store.string()});
  EXPECT_EQ(rp.code, kExitOk) << rp.err;
  EXPECT_NE(rp.out.find("0 mismatches"), std::string::npos);

  auto d = call({"distill", "--store", store.string(), "--out", (dir / "ds").string()});
  ASSERT_EQ(d.code, kExitOk) << d.err;
  Json stats = Json::parse(fixtures::slurp(dir / "ds" / "stats.json"));
  EXPECT_EQ(stats["total"], 15);
  auto s = call({"stats", (dir / "ds" / "full-00000.jsonl").string()});
  EXPECT_EQ(s.code, kExitOk);
  EXPECT_EQ(Json::parse(s.out)["total"], 15);

  auto spec_only = call({"distill", "--store", store.string(), "--out",
                         (dir / "so").string(), "--variant", "spec-only"});
  ASSERT_EQ(spec_only.code, kExitOk) << spec_only.err;
  EXPECT_EQ(Json::parse(fixtures::slurp(dir / "so" / "stats.json"))["total"], 1);
}

TEST(Cli, DistillDecontaminates) {
  fixtures::TempDir dir;
  ASSERT_EQ(call(synth_args(dir)).code, kExitOk);
  {
    std::ofstream b(dir / "bench.jsonl");
    b << Json("Given a non-empty list of integers, return the element that occurs most often.").dump()
      << "\n";
  }
  auto d = call({"distill", "--store", (dir / "run" / "trajectories.jsonl").string(), "--out",
                 (dir / "ds").string(), "--benchmark", (dir / "bench.jsonl").string()});
  ASSERT_EQ(d.code, kExitOk) << d.err;
  Json stats = Json::parse(fixtures::slurp(dir / "ds" / "stats.json"));
  EXPECT_EQ(stats["total"], 0);
  EXPECT_EQ(stats["dropped_problems"], Json::array({"most_frequent"}));
}

TEST(Cli, ReplayDetectsTampering) {
  fixtures::TempDir dir;
  ASSERT_EQ(call(synth_args(dir)).code, kExitOk);
  auto store = dir / "run" / "trajectories.jsonl";
  std::string text = fixtures::slurp(store);
  auto pos = text.find("\"lean_fail\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 11, "\"lean_pass\"");
  std::ofstream(store, std::ios::trunc) << text;
  auto rp = call({"replay", "--store", store.string()});
  EXPECT_EQ(rp.code, kExitFailure);
  EXPECT_NE(rp.err.find("t007"), std::string::npos) << rp.err;
}

TEST(Cli, StatsFromCountsTable) {
  auto r = call({"stats", (fixtures::test_dir() / "fixtures/task_counts.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["total"], 343827);
}

TEST(Cli, InterruptedSynth) {
  fixtures::TempDir dir;
  std::atomic<bool> cancel{true};
  EXPECT_EQ(call(synth_args(dir), &cancel).code, kExitInterrupted);
}

}  // namespace
}  // namespace tracespec::cli
