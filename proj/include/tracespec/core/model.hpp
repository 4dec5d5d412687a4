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

#ifndef TRACESPEC_CORE_MODEL_HPP_
#define TRACESPEC_CORE_MODEL_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tracespec/core/value.hpp"

namespace tracespec {

using TestId = std::string;
using RequirementId = std::string;
using TestIdSet = std::set<TestId>;
using RequirementIdSet = std::set<RequirementId>;

struct Param {
  std::string name;
  std::string type_tag;

  friend bool operator==(const Param&, const Param&) = default;
};

struct FunctionSignature {
  std::string function_name;
  std::vector<Param> input_params;
  std::string output_type;

  friend bool operator==(const FunctionSignature&,
                         const FunctionSignature&) = default;
};

/// Black-box reference used only to label outputs.
struct OracleRef {
  enum class Kind { kBuiltin, kCommand };
  Kind kind = Kind::kBuiltin;
  std::string builtin_name;
  std::vector<std::string> argv;

  friend bool operator==(const OracleRef&, const OracleRef&) = default;
};

enum class TestKind { kPositive, kNegInput, kNegOutput, kAdversarial };

std::string_view to_string(TestKind kind);
TestKind test_kind_from_string(std::string_view text);

/// Pre-labeled input/output pair shipped with a problem (dataset mode).
struct LabeledExample {
  std::vector<Value> input;
  Value output;

  friend bool operator==(const LabeledExample&,
                         const LabeledExample&) = default;
};

struct Problem {
  std::string id;
  std::string description;
  FunctionSignature signature;
  OracleRef oracle;
  std::vector<LabeledExample> labeled_tests;

  friend bool operator==(const Problem&, const Problem&) = default;
};

enum class RequirementKind { kPrecondition, kPostcondition };

std::string_view to_string(RequirementKind kind);
RequirementKind requirement_kind_from_string(std::string_view text);

struct AtomicRequirement {
  RequirementId id;
  RequirementKind kind = RequirementKind::kPostcondition;
  std::string description;

  friend bool operator==(const AtomicRequirement&,
                         const AtomicRequirement&) = default;
};

struct TestCase {
  TestId id;
  TestKind kind = TestKind::kPositive;
  /// Only meaningful when kind == kAdversarial.
  std::optional<TestKind> adversarial_subkind;
  std::vector<Value> input;
  std::optional<Value> output;
  std::string description;
  /// Requirement the test was generated for; used as mapping fallback.
  std::optional<RequirementId> source_requirement;
  /// Oracle label y for negative-output tests (output holds the wrong value).
  std::optional<Value> correct_output;

  /// The kind that decides the check proposition (sub-kind for adversarial).
  TestKind effective_kind() const;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

/// Checks the kind/output invariants and input arity against `signature`.
/// Throws Error(kInvalidModel).
void check_test_case(const TestCase& test, const FunctionSignature& signature);

/// Orders ids like "t2" before "t10": shorter ids first, then lexicographic.
bool natural_id_less(std::string_view a, std::string_view b);

enum class Confidence { kHigh, kMedium, kLow };

std::string_view to_string(Confidence confidence);
Confidence confidence_from_string(std::string_view text);

struct RequirementLink {
  RequirementId requirement_id;
  bool validates = false;
  Confidence confidence = Confidence::kMedium;
  std::string reason;

  friend bool operator==(const RequirementLink&,
                         const RequirementLink&) = default;
};

/// pi: test id -> detailed requirement links.
class TraceabilityMap {
 public:
  using Entries = std::map<TestId, std::vector<RequirementLink>>;

  TraceabilityMap() = default;
  explicit TraceabilityMap(Entries entries) : entries_(std::move(entries)) {}

  void set(const TestId& test, std::vector<RequirementLink> links);
  bool contains(const TestId& test) const { return entries_.count(test) > 0; }
  const std::vector<RequirementLink>* find(const TestId& test) const;

  /// Requirement ids linked with validates = true; empty if unmapped.
  RequirementIdSet implicated(const TestId& test) const;

  const Entries& entries() const { return entries_; }

  friend bool operator==(const TraceabilityMap&,
                         const TraceabilityMap&) = default;

 private:
  Entries entries_;
};

/// Throws Error(kInvalidModel) when the map references unknown ids.
void check_traceability(const TraceabilityMap& map,
                        const std::vector<TestCase>& suite,
                        const std::vector<AtomicRequirement>& requirements);

enum class Dialect { kMini, kLean };

std::string_view to_string(Dialect dialect);
Dialect dialect_from_string(std::string_view text);

struct Specification {
  std::string imports;
  std::string precond_aux;
  std::string precond;
  std::string postcond_aux;
  std::string postcond;
  Dialect dialect = Dialect::kMini;

  friend bool operator==(const Specification&,
                         const Specification&) = default;
};

enum class TestStatus { kLeanPass, kLeanFail, kJudgePass, kJudgeFail };

std::string_view to_string(TestStatus status);
TestStatus test_status_from_string(std::string_view text);

enum class VerdictTag { kProvedTrue, kProvedFalse, kUnknown };

std::string_view to_string(VerdictTag tag);
VerdictTag verdict_tag_from_string(std::string_view text);

struct TestResult {
  TestId test_id;
  TestStatus status = TestStatus::kLeanPass;
  /// What the prover said; judge statuses are legal only after kUnknown.
  VerdictTag prover_verdict = VerdictTag::kProvedTrue;
  std::string diagnostics;
  /// Judge fallback details (empty unless the judge was consulted).
  std::string component;
  std::string judge_answer;
  std::string llm_reasoning;

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

struct EvalReport {
  std::vector<TestResult> results;

  TestIdSet with_status(TestStatus status) const;
  TestIdSet lean_pass() const { return with_status(TestStatus::kLeanPass); }
  TestIdSet lean_fail() const { return with_status(TestStatus::kLeanFail); }
  TestIdSet judge_pass() const { return with_status(TestStatus::kJudgePass); }
  TestIdSet judge_fail() const { return with_status(TestStatus::kJudgeFail); }
  TestIdSet passing() const;
  const TestResult* find(const TestId& id) const;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct RepresentativeTest {
  TestId test_id;
  std::string note;

  friend bool operator==(const RepresentativeTest&,
                         const RepresentativeTest&) = default;
};

struct FeedbackDelta {
  int iteration = 0;
  RequirementIdSet implicated_requirements;
  std::vector<RepresentativeTest> representative_tests;
  /// Exactly the text handed to the repair prompt as {feedback}.
  std::string feedback_text;
  /// Free-form analysis returned by the feedback-generation call.
  std::string analysis;
  double quality_score = 0.0;

  friend bool operator==(const FeedbackDelta&,
                         const FeedbackDelta&) = default;
};

struct TrajectoryStep {
  Specification spec;
  EvalReport report;
  std::optional<FeedbackDelta> delta;

  friend bool operator==(const TrajectoryStep&,
                         const TrajectoryStep&) = default;
};

enum class Outcome { kConverged, kBudgetExhausted, kError, kIncomplete };

std::string_view to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view text);

struct Trajectory {
  Problem problem;
  /// Extraction output before the review pass.
  std::vector<AtomicRequirement> raw_requirements;
  std::vector<AtomicRequirement> requirements;
  std::vector<TestCase> suite;
  TraceabilityMap map;
  std::vector<TrajectoryStep> steps;
  std::optional<Specification> final_spec;
  /// False when final_spec was never evaluated clean over the final suite.
  bool verified = false;
  Outcome outcome = Outcome::kIncomplete;
  std::string error_message;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

}  // namespace tracespec

#endif  // TRACESPEC_CORE_MODEL_HPP_
