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

// Random well-formed trajectories and their record streams.

#ifndef TRACESPEC_TESTS_RANDOM_TRAJECTORY_HPP_
#define TRACESPEC_TESTS_RANDOM_TRAJECTORY_HPP_

#include <random>
#include <string>
#include <vector>

#include "tracespec/core/checkpoint.hpp"
#include "tracespec/store/store.hpp"

namespace randtraj {

using namespace tracespec;

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

  std::string text() {
    static const char* words[] = {"alpha", "be\"ta", "gamma\n", "δέλτα", "{x}", "",
                                  "tab\there", "\\", "back`tick"};
    std::string out;
    int n = pick(4);
    for (int i = 0; i < n; ++i) out += words[pick(9)] + std::string(i + 1 < n ? " " : "");
    return out;
  }

  Value value(int depth = 0) {
    switch (depth > 2 ? pick(3) : pick(4)) {
      case 0: return Value(static_cast<std::int64_t>(rng_()) - std::int64_t{1} * (1 << 30) * 2);
      case 1: return Value(pick(2) == 0);
      case 2: return Value(text());
      default: {
        Value::List l;
        int n = pick(4);
        for (int i = 0; i < n; ++i) l.push_back(value(depth + 1));
        return Value(std::move(l));
      }
    }
  }

  Specification spec() {
    return {pick(3) ? "" : "import Mathlib", text(), text(), text(), text(),
            pick(2) ? Dialect::kMini : Dialect::kLean};
  }

  Trajectory trajectory(const std::string& id) {
    Trajectory t;
    t.problem.id = id;
    t.problem.description = "d " + text();
    t.problem.signature = {"f", {{"a", "Int"}, {"b", "List Text"}}, "Int"};
    t.problem.oracle = pick(2) ? OracleRef{OracleRef::Kind::kBuiltin, "sum", {}}
                               : OracleRef{OracleRef::Kind::kCommand, "", {"python3", "o.py"}};
    int nreq = 1 + pick(4);
    for (int i = 0; i < nreq; ++i) {
      t.requirements.push_back({"R" + std::to_string(i + 1),
                                pick(2) ? RequirementKind::kPrecondition
                                        : RequirementKind::kPostcondition,
                                text()});
    }
    t.raw_requirements = t.requirements;
    if (pick(2)) t.raw_requirements.pop_back();
    int ntests = pick(8);
    for (int i = 0; i < ntests; ++i) {
      TestCase c;
      c.id = "t" + std::to_string(i + 1);
      int k = pick(4);
      c.kind = static_cast<TestKind>(k);
      c.input = {value(), value()};
      if (c.kind != TestKind::kNegInput) c.output = value();
      if (c.kind == TestKind::kNegOutput) c.correct_output = value();
      if (c.kind == TestKind::kAdversarial) {
        c.adversarial_subkind = static_cast<TestKind>(pick(3));
        if (*c.adversarial_subkind == TestKind::kNegInput) c.output.reset();
      }
      c.description = text();
      c.source_requirement = "R" + std::to_string(1 + pick(nreq));
      t.suite.push_back(c);
      std::vector<RequirementLink> links;
      for (int r = 0; r < nreq; ++r) {
        if (pick(2)) {
          links.push_back({"R" + std::to_string(r + 1), pick(2) == 0,
                           static_cast<Confidence>(pick(3)), text()});
        }
      }
      if (!links.empty()) t.map.set(c.id, links);
    }
    int nsteps = pick(4);
    for (int s = 0; s < nsteps; ++s) {
      TrajectoryStep step;
      step.spec = spec();
      for (const auto& c : t.suite) {
        int st = pick(4);
        TestResult r{c.id, static_cast<TestStatus>(st),
                     st < 2 ? (st == 0 ? VerdictTag::kProvedTrue : VerdictTag::kProvedFalse)
                            : VerdictTag::kUnknown,
                     text(), "", "", ""};
        if (st >= 2) {
          r.component = "postcondition";
          r.judge_answer = pick(2) ? "TRUE" : "FALSE";
          r.llm_reasoning = text();
        }
        step.report.results.push_back(r);
      }
      if (s + 1 < nsteps || pick(2)) {
        FeedbackDelta d;
        d.iteration = s;
        d.implicated_requirements = {"R1"};
        if (!t.suite.empty()) d.representative_tests = {{t.suite[0].id, text()}};
        d.feedback_text = text();
        d.analysis = text();
        d.quality_score = pick(100) / 7.0;
        step.delta = d;
      }
      t.steps.push_back(step);
    }
    t.outcome = static_cast<Outcome>(pick(3));
    if (pick(3)) t.final_spec = spec();
    t.verified = t.outcome == Outcome::kConverged && t.final_spec.has_value();
    if (t.outcome == Outcome::kError) t.error_message = text();
    return t;
  }

 private:
  std::mt19937 rng_;
};

/// Record stream in the engine's order: decomposition, test_gen, mapping,
/// then spec/eval(/feedback/repair) per step, then final.
inline std::vector<store::TrajectoryRecord> records_for(const Trajectory& t) {
  using store::StepKind;
  std::vector<store::TrajectoryRecord> out;
  auto add = [&](StepKind kind, Json payload) {
    store::TrajectoryRecord r;
    r.problem_id = t.problem.id;
    r.step_index = static_cast<int>(out.size());
    r.step_kind = kind;
    r.payload = std::move(payload);
    out.push_back(std::move(r));
  };
  add(StepKind::kDecomposition,
      store::decomposition_payload(t.problem, t.raw_requirements, t.requirements));
  add(StepKind::kTestGen, store::tests_payload(t.suite));
  add(StepKind::kMapping, store::mapping_payload(t.map));
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    int it = static_cast<int>(i);
    add(StepKind::kSpec, store::spec_payload(it, t.steps[i].spec));
    add(StepKind::kEval, store::eval_payload(it, t.steps[i].spec, t.steps[i].report));
    if (t.steps[i].delta) {
      add(StepKind::kFeedback, store::feedback_payload(*t.steps[i].delta));
      SpecAttempt a{it + 1, t.steps[i].spec, t.steps[i].delta->feedback_text,
                    t.steps[i].delta->analysis, t.steps[i].delta->quality_score};
      add(StepKind::kRepair, store::repair_payload(a, t.steps[i].spec, true));
    }
  }
  add(StepKind::kFinal,
      store::final_payload(t.outcome, t.final_spec, t.verified, t.error_message));
  return out;
}

}  // namespace randtraj

#endif  // TRACESPEC_TESTS_RANDOM_TRAJECTORY_HPP_
