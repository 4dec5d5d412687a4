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

// Acceptance checks C1..C10. Prints one line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "brute_attribution.hpp"
#include "fake_model.hpp"
#include "fixtures.hpp"
#include "random_spec.hpp"
#include "random_trajectory.hpp"
#include "ref_eval.hpp"
#include "tracespec/core/attribution.hpp"
#include "tracespec/core/error.hpp"
#include "tracespec/distill/distill.hpp"
#include "tracespec/engine/engine.hpp"
#include "tracespec/llm/parse.hpp"
#include "tracespec/llm/prompts.hpp"
#include "tracespec/prover/prover.hpp"
#include "tracespec/store/store.hpp"

namespace {

using namespace tracespec;
using Clock = std::chrono::steady_clock;

enum class Verdict { kPass, kFail, kSkip };

struct Line {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Value int_list(const std::vector<std::int64_t>& xs) {
  Value::List l;
  for (auto x : xs) l.emplace_back(x);
  return Value(std::move(l));
}

FunctionSignature list_sig() { return {"most_frequent", {{"xs", "List Int"}}, "Int"}; }

// C1
Line attribution_algebra() {
  auto start = Clock::now();
  std::mt19937 rng(20260101);
  const char* statuses[] = {"lean_pass", "lean_fail", "judge_pass", "judge_fail"};
  int mismatches = 0, unmapped = 0;
  const int kTrials = 1000;
  for (int trial = 0; trial < kTrials; ++trial) {
    int n = static_cast<int>(rng() % 16);
    int m = 1 + static_cast<int>(rng() % 6);
    EvalReport report;
    std::vector<brute::Row> rows;
    std::vector<brute::Link> links;
    TraceabilityMap map;
    for (int i = 0; i < n; ++i) {
      std::string id = "t" + std::to_string(i + 1);
      int s = static_cast<int>(rng() % 4);
      report.results.push_back({id, test_status_from_string(statuses[s]),
                                s == 0   ? VerdictTag::kProvedTrue
                                : s == 1 ? VerdictTag::kProvedFalse
                                         : VerdictTag::kUnknown,
                                "", "", "", ""});
      rows.push_back({id, statuses[s]});
      std::vector<RequirementLink> ls;
      for (int r = 0; r < m; ++r) {
        if (rng() % 3 == 0) continue;
        bool v = rng() % 4 != 0;
        std::string rid = "R" + std::to_string(r + 1);
        ls.push_back({rid, v, Confidence::kMedium, ""});
        links.push_back({id, rid, v});
      }
      if (!ls.empty()) map.set(id, ls);
    }
    auto want_failing = brute::failing(rows);
    auto got_failing = failing_tests(report);
    if (std::set<std::string>(got_failing.begin(), got_failing.end()) != want_failing) {
      ++mismatches;
      continue;
    }
    auto [ok, want_lift] = brute::lift(want_failing, links);
    try {
      auto got = lift_failing_requirements(got_failing, map);
      if (!ok || std::set<std::string>(got.begin(), got.end()) != want_lift) ++mismatches;
    } catch (const Error& e) {
      if (ok || e.kind() != ErrorKind::kUnmappedTest) ++mismatches;
      ++unmapped;
    }
  }
  double secs = seconds_since(start);
  Line l;
  l.verdict = mismatches == 0 && secs < 5.0 ? Verdict::kPass : Verdict::kFail;
  l.detail = std::to_string(kTrials) + " instances (" + std::to_string(unmapped) +
             " unmapped), " + std::to_string(mismatches) + " mismatches, " +
             fmt("%.2f s", secs);
  return l;
}

// C2
Line eval_partition() {
  std::mt19937 rng(77);
  randspec::Gen gen(78);
  int violations = 0, judged = 0;
  const int kTrials = 1000;
  for (int trial = 0; trial < kTrials; ++trial) {
    auto backend = std::make_shared<llm::FunctionBackend>(
        [&rng](const std::vector<llm::ChatMessage>&, const llm::CallTag&) {
          static const char* replies[] = {"answer: true", "answer: false", "hmm"};
          return llm::Completion{replies[rng() % 3], false};
        });
    auto gw = std::make_shared<llm::Gateway>(backend, llm::CompletionParams{});
    int n = 1 + static_cast<int>(rng() % 10);
    std::set<TestId> forced;
    for (int i = 0; i < n; ++i) {
      if (rng() % 3 == 0) {
        char id[8];
        std::snprintf(id, sizeof id, "t%03d", i + 1);
        forced.insert(id);
      }
    }
    auto prover = std::make_shared<prover::ForcedUnknownBackend>(
        std::make_shared<prover::MiniBackend>(), forced);
    engine::ProblemSession session(fixtures::worked_problem(), fixtures::worked_config(),
                                   fixtures::services(gw, nullptr, prover));
    std::vector<TestCase> tests;
    for (int i = 0; i < n; ++i) {
      TestCase t;
      int k = static_cast<int>(rng() % 4);
      t.kind = static_cast<TestKind>(k);
      t.input = {int_list(gen.list())};
      if (t.kind == TestKind::kAdversarial) t.adversarial_subkind = static_cast<TestKind>(rng() % 3);
      if (t.effective_kind() != TestKind::kNegInput) t.output = Value(gen.scalar());
      tests.push_back(t);
    }
    auto suite = session.admit(tests);
    Specification spec{"", "", gen.precond(), "", gen.postcond(), Dialect::kMini};
    EvalReport report;
    try {
      report = session.evaluate_spec(spec, suite);
    } catch (const Error&) {
      ++violations;
      continue;
    }
    std::map<TestId, int> seen;
    bool bad = false;
    for (const auto& r : report.results) {
      ++seen[r.test_id];
      bool judge = r.status == TestStatus::kJudgePass || r.status == TestStatus::kJudgeFail;
      if (judge != (r.prover_verdict == VerdictTag::kUnknown)) bad = true;
      if (judge) ++judged;
      if (r.status == TestStatus::kLeanPass && r.prover_verdict != VerdictTag::kProvedTrue) bad = true;
      if (r.status == TestStatus::kLeanFail && r.prover_verdict != VerdictTag::kProvedFalse) bad = true;
    }
    for (const auto& t : suite) {
      if (seen[t.id] != 1) bad = true;
    }
    if (seen.size() != suite.size()) bad = true;
    std::size_t parts = report.lean_pass().size() + report.lean_fail().size() +
                        report.judge_pass().size() + report.judge_fail().size();
    if (parts != suite.size()) bad = true;
    if (bad) ++violations;
  }
  Line l;
  l.verdict = violations == 0 ? Verdict::kPass : Verdict::kFail;
  l.detail = std::to_string(kTrials) + " trials, " + std::to_string(judged) +
             " judged results, " + std::to_string(violations) + " violations";
  return l;
}

// C3
Line proposition_polarity() {
  randspec::Gen gen(4242);
  prover::MiniBackend mini;
  int disagreements = 0, passes = 0;
  const int kPairs = 500;
  for (int i = 0; i < kPairs; ++i) {
    Specification spec{"", "", gen.precond(), "", gen.postcond(), Dialect::kMini};
    auto xs = gen.list();
    int k = gen.pick(3);
    TestCase t;
    t.id = "t" + std::to_string(i);
    t.kind = static_cast<TestKind>(k);
    t.input = {int_list(xs)};
    std::optional<ref::V> y;
    if (t.kind != TestKind::kNegInput) {
      auto v = gen.scalar();
      t.output = Value(v);
      y = ref::V::mk_int(v);
    }
    std::vector<ref::V> rl;
    for (auto x : xs) rl.push_back(ref::V::mk_int(x));
    ref::Scope scope{{"xs", ref::V::mk_list(rl)}};
    bool want = ref::expected_pass(spec.precond, spec.postcond, static_cast<ref::Kind>(k), scope, y);
    bool got = false;
    try {
      got = prover::status_of(prover::decide(
                prover::instantiate_proposition(spec, t, list_sig()), mini)) ==
            prover::ProverStatus::kPass;
    } catch (const Error&) {
      got = false;
    }
    passes += got ? 1 : 0;
    if (got != want) ++disagreements;
  }
  Line l;
  l.verdict = disagreements == 0 ? Verdict::kPass : Verdict::kFail;
  l.detail = std::to_string(kPairs) + " pairs (" + std::to_string(passes) + " pass), " +
             std::to_string(disagreements) + " disagreements";
  return l;
}

// C4
Line worked_example() {
  auto start = Clock::now();
  fixtures::TempDir dir;
  std::vector<Trajectory> runs;
  for (int i = 0; i < 2; ++i) {
    auto store = std::make_shared<store::TrajectoryStore>(dir / ("run" + std::to_string(i) + ".jsonl"));
    auto gw = fixtures::scripted_gateway(llm::ScriptedBackend::load(fixtures::worked_script()));
    runs.push_back(engine::synthesize(fixtures::worked_problem(), fixtures::worked_config(),
                                      fixtures::services(gw, store)));
  }
  double secs = seconds_since(start);
  const auto& t = runs[0];
  std::vector<std::string> problems;
  if (t.outcome != Outcome::kConverged) problems.push_back("outcome " + std::string(to_string(t.outcome)));
  if (t.steps.size() != 2) problems.push_back(std::to_string(t.steps.size()) + " iterations");
  if (t.steps.empty() || !t.steps[0].delta ||
      t.steps[0].delta->implicated_requirements != RequirementIdSet{"AR3"}) {
    problems.push_back("implicated set differs");
  }
  const TestCase* probe = nullptr;
  for (const auto& c : t.suite) {
    if (c.kind == TestKind::kNegOutput && c.input == std::vector<Value>{int_list({1, 2})} &&
        c.output == std::optional<Value>(Value(2))) {
      probe = &c;
    }
  }
  if (!probe) {
    problems.push_back("no neg_output test <[1,2],2>");
  } else if (t.steps.size() == 2) {
    auto r0 = t.steps[0].report.find(probe->id);
    auto r1 = t.steps[1].report.find(probe->id);
    if (!r0 || r0->status != TestStatus::kLeanFail) problems.push_back("S0 does not fail the probe");
    if (!r1 || r1->status != TestStatus::kLeanPass) problems.push_back("S1 does not reject the output");
  }
  std::string a = fixtures::slurp(dir / "run0.jsonl");
  std::string b = fixtures::slurp(dir / "run1.jsonl");
  if (a.empty() || a != b) problems.push_back("stores differ");
  if (secs >= 10.0) problems.push_back("too slow");
  Line l;
  l.verdict = problems.empty() ? Verdict::kPass : Verdict::kFail;
  std::string why;
  for (const auto& p : problems) why += "; " + p;
  l.detail = "converged in " + std::to_string(t.steps.size()) + " iterations, implicated {AR3}, " +
             "stores " + (a == b ? "byte-identical" : "differ") + " (" +
             std::to_string(a.size()) + " bytes), " + fmt("%.2f s", secs) + why;
  return l;
}

// C5
Line prompt_fidelity() {
  Json contexts = Json::parse(fixtures::slurp(fixtures::test_dir() / "golden/contexts.json"));
  int matched = 0;
  std::string bad;
  for (auto task : llm::dataset_tasks()) {
    std::string name(llm::to_string(task));
    llm::PromptContext ctx;
    for (auto& [k, v] : contexts.at(name).items()) ctx[k] = v.get<std::string>();
    auto msgs = llm::render(task, ctx);
    bool ok = msgs.size() == 2 &&
              msgs[0].content == fixtures::slurp(fixtures::test_dir() / "golden" / (name + ".system.txt")) &&
              msgs[1].content == fixtures::slurp(fixtures::test_dir() / "golden" / (name + ".user.txt"));
    if (ok) {
      ++matched;
    } else {
      bad += " " + name;
    }
  }
  llm::PromptContext fields{{"imports", "import Mathlib"},
                            {"precond_aux", ""},
                            {"precond", "xs.length > 0"},
                            {"postcond_aux", "def helper := 1\n\n-- two paragraphs"},
                            {"postcond", "result ∈ xs"}};
  std::string text = llm::render_response(llm::TaskKind::kDirectSpecgen, fields);
  bool round_trip = false;
  try {
    auto parsed = llm::parse_fielded(text);
    llm::Fields want{{"imports", "import Mathlib"},
                     {"precond_aux", ""},
                     {"precond", "xs.length > 0"},
                     {"postcond_aux", "def helper := 1\n\n-- two paragraphs"},
                     {"postcond", "result ∈ xs"}};
    round_trip = parsed == want && llm::parse_fielded(llm::format_fielded(parsed)) == want;
  } catch (const Error&) {
  }
  Line l;
  l.verdict = matched == 11 && round_trip ? Verdict::kPass : Verdict::kFail;
  l.detail = std::to_string(matched) + "/11 golden transcripts match, five-field round-trip " +
             (round_trip ? "ok" : "broken") + (bad.empty() ? "" : "; mismatched:" + bad);
  return l;
}

// C6
Line dataset_tables() {
  Json j = Json::parse(fixtures::slurp(fixtures::test_dir() / "fixtures/task_counts.json"));
  std::map<llm::TaskKind, std::size_t> counts;
  for (auto& [k, v] : j.at("counts").items()) counts[llm::task_kind_from_string(k)] = v.get<std::size_t>();
  auto stats = distill::dataset_stats(counts);
  std::size_t no_test = stats.variant_totals[distill::Variant::kNoTest];
  std::size_t spec_only = stats.variant_totals[distill::Variant::kSpecOnly];
  std::size_t test_count = stats.total - no_test;
  double exact = 100.0 * static_cast<double>(test_count) / static_cast<double>(stats.total);
  bool totals_ok = stats.total == 343827 && no_test == 121531 && spec_only == 6842;
  bool share_ok = std::abs(exact - 64.6) <= 0.05 && std::abs(stats.test_share - 64.6) <= 0.05;
  Line l;
  l.verdict = totals_ok && share_ok ? Verdict::kPass : Verdict::kFail;
  l.detail = "total " + std::to_string(stats.total) + ", no-test " + std::to_string(no_test) +
             ", spec-only " + std::to_string(spec_only) + ", test share " +
             std::to_string(test_count) + "/" + std::to_string(stats.total) + " = " +
             fmt("%.3f%%", exact) + " (rounds to " + fmt("%.1f", stats.test_share) +
             "), target 64.6 +/- 0.05";
  return l;
}

// C7
Line decontamination() {
  Json cases = Json::parse(fixtures::slurp(fixtures::test_dir() / "fixtures/decontam/cases.json"));
  int right = 0;
  std::vector<Problem> all;
  std::vector<std::string> bench;
  std::set<std::string> expect;
  for (const auto& c : cases) {
    Problem p;
    p.id = c["id"].get<std::string>();
    p.description = c["description"].get<std::string>();
    bool drop = c["expect"] == "drop";
    auto r = distill::decontaminate({p}, {c["benchmark"].get<std::string>()}, 10);
    right += (r.dropped.size() == 1) == drop ? 1 : 0;
    all.push_back(p);
    bench.push_back(c["benchmark"].get<std::string>());
    if (drop) expect.insert(p.id);
  }
  auto combined = distill::decontaminate(all, bench, 10);
  bool combined_ok = std::set<std::string>(combined.dropped.begin(), combined.dropped.end()) == expect;
  Line l;
  l.verdict = right == static_cast<int>(cases.size()) && cases.size() == 50 && combined_ok
                  ? Verdict::kPass
                  : Verdict::kFail;
  l.detail = std::to_string(right) + "/" + std::to_string(cases.size()) +
             " cases classified (10-token overlaps dropped, 9-token kept), combined run " +
             (combined_ok ? "agrees" : "disagrees");
  return l;
}

// C8
Line budget_semantics() {
  fake::Model model;
  engine::EngineConfig cfg;
  cfg.max_iterations = 3;
  auto sink = std::make_shared<store::MemorySink>();
  auto t = engine::synthesize(fixtures::worked_problem(), cfg,
                              fixtures::services(model.gateway(), sink));
  auto records = sink->records();
  int repairs = 0;
  std::size_t largest = 0;
  for (const auto& r : records) {
    if (r.step_kind == store::StepKind::kRepair) ++repairs;
  }
  for (const auto& s : t.steps) largest = std::max(largest, s.report.results.size());
  largest = std::max(largest, t.suite.size());
  auto cps = store::checkpoints_from_records(records).checkpoints;
  std::size_t last_attempts = 0;
  for (const auto& c : cps) {
    std::size_t n = c.testcases.size() + c.negative_input_testcases.size() +
                    c.negative_output_testcases.size() + c.adversarial_testcases.size();
    largest = std::max(largest, n);
    last_attempts = c.spec_attempts.size();
  }
  bool ok = t.outcome == Outcome::kBudgetExhausted && repairs == 3 && t.steps.size() == 3 &&
            model.count(llm::TaskKind::kSpecRefinement) == 3 && largest <= 60;
  Line l;
  l.verdict = ok ? Verdict::kPass : Verdict::kFail;
  l.detail = std::string(to_string(t.outcome)) + ", " + std::to_string(repairs) +
             " spec_attempts over " + std::to_string(t.steps.size()) +
             " evaluations (last checkpoint holds " + std::to_string(last_attempts) +
             " earlier attempts), largest suite " + std::to_string(largest);
  return l;
}

// C9
Line store_round_trip() {
  randtraj::Gen gen(909);
  std::mt19937 rng(910);
  int equal = 0, prefix_ok = 0, prefixes = 0;
  const int kTrajectories = 200;
  fixtures::TempDir dir;
  for (int i = 0; i < kTrajectories; ++i) {
    auto t = gen.trajectory("p" + std::to_string(i));
    auto path = dir / ("s" + std::to_string(i) + ".jsonl");
    auto records = randtraj::records_for(t);
    {
      store::TrajectoryStore s(path);
      for (const auto& r : records) s.append_step(r);
    }
    try {
      if (store::load_trajectory(path, t.problem.id) == t) ++equal;
    } catch (const Error&) {
    }
    std::string full = fixtures::slurp(path);
    for (int c = 0; c < 2; ++c) {
      ++prefixes;
      std::size_t cut = full.empty() ? 0 : rng() % full.size();
      std::ofstream(path, std::ios::binary | std::ios::trunc) << full.substr(0, cut);
      std::size_t complete = 0;
      for (std::size_t k = 0; k < cut; ++k) complete += full[k] == '\n' ? 1 : 0;
      try {
        auto got = store::read_records(path, false).records;
        std::vector<store::TrajectoryRecord> want(records.begin(), records.begin() + complete);
        for (auto& w : want) w.timestamp = 0;
        auto rec = store::recover_trajectory(path, t.problem.id);
        auto expect = store::trajectory_from_records(want, t.problem.id, false);
        if (got == want && rec == expect) ++prefix_ok;
      } catch (const Error&) {
      }
    }
  }
  Line l;
  l.verdict = equal == kTrajectories && prefix_ok == prefixes ? Verdict::kPass : Verdict::kFail;
  l.detail = std::to_string(equal) + "/" + std::to_string(kTrajectories) +
             " trajectories reload equal, " + std::to_string(prefix_ok) + "/" +
             std::to_string(prefixes) + " truncated prefixes recover to the last complete record";
  return l;
}

// C10
Line lean_conformance() {
  if (!prover::command_available("lean")) {
    return {Verdict::kSkip, "lean not on PATH"};
  }
  fixtures::TempDir dir;
  prover::LeanConfig cfg;
  cfg.command = {"lean"};
  cfg.tactic = "decide";
  cfg.timeout = std::chrono::seconds(60);
  cfg.scratch_dir = dir / "scratch";
  prover::LeanBackend backend(cfg);
  FunctionSignature sig{"double", {{"n", "Nat"}}, "Nat"};
  Specification spec{"", "", "n < 1000", "", "result = 2 * n", Dialect::kLean};
  struct Case {
    TestKind kind;
    std::int64_t n;
    std::optional<std::int64_t> y;
    VerdictTag want;
  };
  std::vector<Case> cases{
      {TestKind::kPositive, 3, 6, VerdictTag::kProvedTrue},
      {TestKind::kNegInput, 5000, std::nullopt, VerdictTag::kProvedTrue},
      {TestKind::kNegOutput, 4, 9, VerdictTag::kProvedTrue},
      {TestKind::kPositive, 3, 7, VerdictTag::kProvedFalse},
      {TestKind::kNegInput, 5, std::nullopt, VerdictTag::kProvedFalse},
  };
  int right = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    TestCase t;
    t.id = "c" + std::to_string(i);
    t.kind = cases[i].kind;
    t.input = {Value(cases[i].n)};
    if (cases[i].y) t.output = Value(*cases[i].y);
    try {
      auto v = backend.decide(prover::instantiate_proposition(spec, t, sig));
      right += v.tag == cases[i].want ? 1 : 0;
    } catch (const Error&) {
    }
  }
  prover::LeanConfig slow_cfg = cfg;
  slow_cfg.timeout = std::chrono::milliseconds(1500);
  prover::LeanBackend slow(slow_cfg);
  Specification heavy{"", "", "", "",
                      "(List.range 2000000).foldl (· + ·) 0 = result", Dialect::kLean};
  TestCase t;
  t.id = "c5";
  t.input = {Value(1)};
  t.output = Value(1);
  try {
    right += slow.decide(prover::instantiate_proposition(heavy, t, sig)).tag == VerdictTag::kUnknown;
  } catch (const Error&) {
  }
  Line l;
  l.verdict = right == 6 ? Verdict::kPass : Verdict::kFail;
  l.detail = std::to_string(right) + "/6 conformance cases classified";
  return l;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    std::function<Line()> run;
  };
  std::vector<Criterion> criteria{
      {"C1", "attribution algebra", attribution_algebra},
      {"C2", "eval partition", eval_partition},
      {"C3", "proposition polarity", proposition_polarity},
      {"C4", "worked example end-to-end", worked_example},
      {"C5", "prompt fidelity", prompt_fidelity},
      {"C6", "dataset tables", dataset_tables},
      {"C7", "decontamination", decontamination},
      {"C8", "budget semantics", budget_semantics},
      {"C9", "store round-trip", store_round_trip},
      {"C10", "lean conformance (optional)", lean_conformance},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Line line;
    try {
      line = c.run();
    } catch (const std::exception& e) {
      line = {Verdict::kFail, std::string("threw: ") + e.what()};
    }
    const char* tag = line.verdict == Verdict::kPass   ? "PASS"
                      : line.verdict == Verdict::kFail ? "FAIL"
                                                       : "SKIP";
    if (line.verdict == Verdict::kFail) ++failed;
    std::cout << tag << " " << c.id << " " << c.title << ": " << line.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
