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

#include <fstream>
#include <thread>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "random_trajectory.hpp"
#include "tracespec/core/error.hpp"
#include "tracespec/store/store.hpp"

namespace tracespec::store {
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

TrajectoryRecord rec(const std::string& pid, int idx, StepKind kind, Json payload = Json::object()) {
  TrajectoryRecord r;
  r.problem_id = pid;
  r.step_index = idx;
  r.step_kind = kind;
  r.payload = std::move(payload);
  return r;
}

TEST(Record, JsonShape) {
  auto r = rec("p", 0, StepKind::kSpec, {{"iteration", 0}});
  r.timestamp = 5;
  Json j = to_json(r);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["step_kind"], "spec");
  EXPECT_EQ(record_from_json(j), r);
  j["schema_version"] = 99;
  EXPECT_THROW(record_from_json(j), Error);
}

TEST(Store, RandomRoundTrips) {
  randtraj::Gen gen(11);
  for (int i = 0; i < 60; ++i) {
    fixtures::TempDir dir;
    auto t = gen.trajectory("p" + std::to_string(i));
    {
      TrajectoryStore store(dir / "s.jsonl");
      for (const auto& r : randtraj::records_for(t)) store.append_step(r);
    }
    ASSERT_EQ(load_trajectory(dir / "s.jsonl", t.problem.id), t) << i;
  }
}

TEST(Store, InterleavedProblemsAndCheckpoints) {
  randtraj::Gen gen(3);
  fixtures::TempDir dir;
  auto a = gen.trajectory("b");
  auto b = gen.trajectory("a");
  auto ra = randtraj::records_for(a);
  auto rb = randtraj::records_for(b);
  {
    TrajectoryStore store(dir / "s.jsonl");
    for (std::size_t i = 0; i < std::max(ra.size(), rb.size()); ++i) {
      if (i < ra.size()) store.append_step(ra[i]);
      if (i < rb.size()) store.append_step(rb[i]);
    }
  }
  EXPECT_EQ(load_trajectory(dir / "s.jsonl", "b"), a);
  EXPECT_EQ(load_trajectory(dir / "s.jsonl", "a"), b);
  auto cps = iterate_checkpoints(dir / "s.jsonl");
  ASSERT_EQ(cps.checkpoints.size(), a.steps.size() + b.steps.size());
  for (std::size_t i = 0; i + 1 < cps.checkpoints.size(); ++i) {
    EXPECT_LE(cps.checkpoints[i].problem_id, cps.checkpoints[i + 1].problem_id);
  }
}

TEST(Store, OrderingRules) {
  fixtures::TempDir dir;
  TrajectoryStore store(dir / "s.jsonl");
  store.append_step(rec("p", 0, StepKind::kDecomposition));
  EXPECT_EQ(kind_of([&] { store.append_step(rec("p", 0, StepKind::kTestGen)); }),
            ErrorKind::kDuplicateStep);
  EXPECT_EQ(kind_of([&] { store.append_step(rec("p", 2, StepKind::kTestGen)); }),
            ErrorKind::kOutOfOrderStep);
  store.append_step(rec("p", 1, StepKind::kFinal, final_payload(Outcome::kError, std::nullopt, false, "x")));
  EXPECT_EQ(kind_of([&] { store.append_step(rec("p", 2, StepKind::kTestGen)); }),
            ErrorKind::kStoreClosed);
  store.append_step(rec("q", 0, StepKind::kDecomposition));
}

TEST(Store, ReopenSeedsChecks) {
  fixtures::TempDir dir;
  {
    TrajectoryStore store(dir / "s.jsonl");
    store.append_step(rec("p", 0, StepKind::kDecomposition));
  }
  TrajectoryStore again(dir / "s.jsonl");
  EXPECT_EQ(kind_of([&] { again.append_step(rec("p", 0, StepKind::kDecomposition)); }),
            ErrorKind::kDuplicateStep);
  again.append_step(rec("p", 1, StepKind::kTestGen, tests_payload({})));
  EXPECT_EQ(read_records(dir / "s.jsonl", true).records.size(), 2u);
}

TEST(Store, ConcurrentWriters) {
  fixtures::TempDir dir;
  {
    TrajectoryStore store(dir / "s.jsonl");
    std::vector<std::thread> threads;
    for (int w = 0; w < 4; ++w) {
      threads.emplace_back([&, w] {
        for (int i = 0; i < 25; ++i) {
          store.append_step(rec("p" + std::to_string(w), i, StepKind::kSpec));
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  auto rr = read_records(dir / "s.jsonl", true);
  EXPECT_EQ(rr.records.size(), 100u);
  EXPECT_EQ(rr.corrupt, 0u);
}

TEST(Store, ClockStampsZeroTimestamps) {
  fixtures::TempDir dir;
  {
    TrajectoryStore store(dir / "s.jsonl", [] { return std::int64_t{42}; });
    store.append_step(rec("p", 0, StepKind::kDecomposition));
    auto r = rec("p", 1, StepKind::kTestGen);
    r.timestamp = 7;
    store.append_step(r);
  }
  auto rr = read_records(dir / "s.jsonl", true);
  EXPECT_EQ(rr.records[0].timestamp, 42);
  EXPECT_EQ(rr.records[1].timestamp, 7);
}

TEST(Store, TruncationRecoversPrefix) {
  randtraj::Gen gen(5);
  fixtures::TempDir dir;
  auto t = gen.trajectory("p");
  auto records = randtraj::records_for(t);
  {
    TrajectoryStore store(dir / "s.jsonl");
    for (const auto& r : records) store.append_step(r);
  }
  std::string full = fixtures::slurp(dir / "s.jsonl");
  std::vector<std::size_t> ends;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (full[i] == '\n') ends.push_back(i + 1);
  }
  for (std::size_t cut : {ends[0] + 3, ends[1], full.size() - 1}) {
    std::ofstream(dir / "s.jsonl", std::ios::binary | std::ios::trunc) << full.substr(0, cut);
    std::size_t whole = 0;
    while (whole < ends.size() && ends[whole] <= cut) ++whole;
    bool partial = cut != (whole ? ends[whole - 1] : 0);
    auto rr = read_records(dir / "s.jsonl", false);
    EXPECT_EQ(rr.records.size(), whole);
    EXPECT_EQ(rr.corrupt, partial ? 1u : 0u);
    EXPECT_EQ(kind_of([&] { load_trajectory(dir / "s.jsonl", "p"); }),
              partial ? ErrorKind::kCorruptRecord : ErrorKind::kIncomplete);
    auto rec_t = recover_trajectory(dir / "s.jsonl", "p");
    EXPECT_EQ(rec_t.outcome, Outcome::kIncomplete);
    EXPECT_EQ(rec_t.problem, t.problem);
  }
}

TEST(Store, CorruptLineStrictness) {
  fixtures::TempDir dir;
  {
    Problem problem{"p", "desc", {"f", {{"a", "Int"}}, "Int"}, {}, {}};
    problem.oracle.builtin_name = "sum";
    TrajectoryStore store(dir / "s.jsonl");
    store.append_step(rec("p", 0, StepKind::kDecomposition, decomposition_payload(problem, {}, {})));
  }
  std::ofstream(dir / "s.jsonl", std::ios::app) << "{not json}\n";
  try {
    read_records(dir / "s.jsonl", true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCorruptRecord);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(read_records(dir / "s.jsonl", false).corrupt, 1u);
  EXPECT_EQ(iterate_checkpoints(dir / "s.jsonl").corrupt_records, 1u);
}

TEST(Checkpoints, CumulativePerEval) {
  randtraj::Gen gen(9);
  Trajectory t;
  do {
    t = gen.trajectory("p");
  } while (t.steps.size() < 2 || t.suite.empty());
  auto cps = checkpoints_from_records(randtraj::records_for(t));
  ASSERT_EQ(cps.checkpoints.size(), t.steps.size());
  const auto& last = cps.checkpoints.back();
  EXPECT_EQ(last.problem_id, "p");
  EXPECT_EQ(last.problem_description, t.problem.description);
  EXPECT_EQ(last.spec, std::optional<Specification>(t.steps.back().spec));
  std::size_t total = last.testcases.size() + last.negative_input_testcases.size() +
                      last.negative_output_testcases.size() + last.adversarial_testcases.size();
  EXPECT_EQ(total, t.suite.size());
  EXPECT_EQ(last.spec_eval.size(), t.suite.size() * t.steps.size());
  EXPECT_LT(cps.checkpoints.front().spec_eval.size(), last.spec_eval.size());
}

}  // namespace
}  // namespace tracespec::store
