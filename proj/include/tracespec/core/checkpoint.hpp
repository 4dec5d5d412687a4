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

#ifndef TRACESPEC_CORE_CHECKPOINT_HPP_
#define TRACESPEC_CORE_CHECKPOINT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "tracespec/core/model.hpp"

namespace tracespec {

/// One repair attempt: the specification that failed plus the feedback it got.
struct SpecAttempt {
  int iteration = 0;
  Specification spec;
  std::string feedback;
  std::string informalized_feedback;
  std::optional<double> quality_score;

  friend bool operator==(const SpecAttempt&, const SpecAttempt&) = default;
};

/// One per-test outcome of a specification evaluation.
struct SpecEvalResult {
  int iteration = 0;
  TestId test_id;
  /// positive / neg_input / neg_output (adversarial tests use the sub-kind).
  std::string test_type;
  /// pass / fail (decided by the prover) or unknown (judge fallback).
  std::string result_status;
  TestStatus status = TestStatus::kLeanPass;
  std::string component;
  /// TRUE / FALSE as answered by the judge; empty otherwise.
  std::string eval_result;
  std::string llm_reasoning;
  Specification spec;

  friend bool operator==(const SpecEvalResult&,
                         const SpecEvalResult&) = default;
};

/// Snapshot of a problem's accumulated state at one evaluation step. Field
/// names of the JSON encoding are the keys the distillery consumes.
struct Checkpoint {
  std::string problem_id;
  int step_index = 0;
  std::optional<std::string> problem_description;
  std::optional<std::vector<AtomicRequirement>> informal_requirements;
  std::optional<FunctionSignature> signature;
  std::vector<TestCase> testcases;
  std::vector<TestCase> negative_input_testcases;
  std::vector<TestCase> negative_output_testcases;
  std::vector<TestCase> adversarial_testcases;
  std::optional<TraceabilityMap> testcase_ar_mapping_detailed;
  std::optional<Specification> spec;
  std::vector<SpecAttempt> spec_attempts;
  std::vector<SpecEvalResult> spec_eval;
  /// Set once the problem's final record exists.
  std::optional<Outcome> outcome;

  /// Looks a test up across the four test arrays.
  const TestCase* find_test(const TestId& id) const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

}  // namespace tracespec

#endif  // TRACESPEC_CORE_CHECKPOINT_HPP_
