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

#include "tracespec/core/attribution.hpp"

#include <set>

#include "tracespec/core/error.hpp"

namespace tracespec {

TestIdSet failing_tests(const EvalReport& report) {
  TestIdSet out;
  for (const auto& r : report.results) {
    if (r.status == TestStatus::kLeanFail || r.status == TestStatus::kJudgeFail) {
      out.insert(r.test_id);
    }
  }
  return out;
}

RequirementIdSet lift_failing_requirements(const TestIdSet& failing,
                                           const TraceabilityMap& map) {
  RequirementIdSet out;
  for (const auto& test : failing) {
    auto implicated = map.implicated(test);
    if (implicated.empty()) {
      throw Error(ErrorKind::kUnmappedTest, test);
    }
    out.insert(implicated.begin(), implicated.end());
  }
  return out;
}

void validate_report(const EvalReport& report,
                     const std::vector<TestCase>& suite) {
  auto violation = [](const TestId& id, const std::string& why) {
    throw Error(ErrorKind::kPartitionViolation, id + ": " + why);
  };
  std::set<TestId> suite_ids;
  for (const auto& t : suite) suite_ids.insert(t.id);

  std::set<TestId> seen;
  for (const auto& r : report.results) {
    if (!seen.insert(r.test_id).second) {
      violation(r.test_id, "appears in more than one partition");
    }
    if (!suite_ids.count(r.test_id)) {
      violation(r.test_id, "not part of the evaluated suite");
    }
    switch (r.status) {
      case TestStatus::kLeanPass:
        if (r.prover_verdict != VerdictTag::kProvedTrue) {
          violation(r.test_id, "lean_pass without a ProvedTrue verdict");
        }
        break;
      case TestStatus::kLeanFail:
        if (r.prover_verdict != VerdictTag::kProvedFalse) {
          violation(r.test_id, "lean_fail without a ProvedFalse verdict");
        }
        break;
      case TestStatus::kJudgePass:
      case TestStatus::kJudgeFail:
        if (r.prover_verdict != VerdictTag::kUnknown) {
          violation(r.test_id, "judge status after a conclusive prover verdict");
        }
        break;
    }
  }
  for (const auto& id : suite_ids) {
    if (!seen.count(id)) violation(id, "missing from the report");
  }
}

}  // namespace tracespec
