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

#include "tracespec/core/model.hpp"

#include <array>
#include <set>

#include "tracespec/core/checkpoint.hpp"
#include "tracespec/core/error.hpp"

namespace tracespec {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view text,
                const std::array<std::pair<Enum, std::string_view>, N>& names,
                std::string_view what) {
  for (const auto& [value, name] : names) {
    if (name == text) return value;
  }
  throw Error(ErrorKind::kInvalidModel,
              "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

template <typename Enum, std::size_t N>
std::string_view enum_name(
    Enum value, const std::array<std::pair<Enum, std::string_view>, N>& names) {
  for (const auto& [candidate, name] : names) {
    if (candidate == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<TestKind, std::string_view>, 4> kTestKinds{{
    {TestKind::kPositive, "positive"},
    {TestKind::kNegInput, "neg_input"},
    {TestKind::kNegOutput, "neg_output"},
    {TestKind::kAdversarial, "adversarial"},
}};

constexpr std::array<std::pair<RequirementKind, std::string_view>, 2>
    kRequirementKinds{{
        {RequirementKind::kPrecondition, "precondition"},
        {RequirementKind::kPostcondition, "postcondition"},
    }};

constexpr std::array<std::pair<Confidence, std::string_view>, 3> kConfidences{{
    {Confidence::kHigh, "high"},
    {Confidence::kMedium, "medium"},
    {Confidence::kLow, "low"},
}};

constexpr std::array<std::pair<Dialect, std::string_view>, 2> kDialects{{
    {Dialect::kMini, "mini"},
    {Dialect::kLean, "lean"},
}};

constexpr std::array<std::pair<TestStatus, std::string_view>, 4> kStatuses{{
    {TestStatus::kLeanPass, "lean_pass"},
    {TestStatus::kLeanFail, "lean_fail"},
    {TestStatus::kJudgePass, "judge_pass"},
    {TestStatus::kJudgeFail, "judge_fail"},
}};

constexpr std::array<std::pair<VerdictTag, std::string_view>, 3> kVerdicts{{
    {VerdictTag::kProvedTrue, "proved_true"},
    {VerdictTag::kProvedFalse, "proved_false"},
    {VerdictTag::kUnknown, "unknown"},
}};

constexpr std::array<std::pair<Outcome, std::string_view>, 4> kOutcomes{{
    {Outcome::kConverged, "converged"},
    {Outcome::kBudgetExhausted, "budget_exhausted"},
    {Outcome::kError, "error"},
    {Outcome::kIncomplete, "incomplete"},
}};

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidValue: return "InvalidValue";
    case ErrorKind::kInvalidModel: return "InvalidModel";
    case ErrorKind::kUnmappedTest: return "UnmappedTest";
    case ErrorKind::kPartitionViolation: return "PartitionViolation";
    case ErrorKind::kArityMismatch: return "ArityMismatch";
    case ErrorKind::kDialectMismatch: return "DialectMismatch";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kTypeError: return "TypeError";
    case ErrorKind::kLiteralRenderError: return "LiteralRenderError";
    case ErrorKind::kBackendUnavailable: return "BackendUnavailable";
    case ErrorKind::kMissingPlaceholder: return "MissingPlaceholder";
    case ErrorKind::kUnknownTask: return "UnknownTask";
    case ErrorKind::kTransportError: return "TransportError";
    case ErrorKind::kScriptExhausted: return "ScriptExhausted";
    case ErrorKind::kTokenLimit: return "TokenLimit";
    case ErrorKind::kMissingCompletedMarker: return "MissingCompletedMarker";
    case ErrorKind::kDuplicateField: return "DuplicateField";
    case ErrorKind::kNoBlockFound: return "NoBlockFound";
    case ErrorKind::kDecodeError: return "DecodeError";
    case ErrorKind::kParseFailure: return "ParseFailure";
    case ErrorKind::kEmptyDecomposition: return "EmptyDecomposition";
    case ErrorKind::kOracleCrash: return "OracleCrash";
    case ErrorKind::kOracleTimeout: return "OracleTimeout";
    case ErrorKind::kMappingFailure: return "MappingFailure";
    case ErrorKind::kInterrupted: return "Interrupted";
    case ErrorKind::kDuplicateStep: return "DuplicateStep";
    case ErrorKind::kOutOfOrderStep: return "OutOfOrderStep";
    case ErrorKind::kStoreClosed: return "StoreClosed";
    case ErrorKind::kIncomplete: return "Incomplete";
    case ErrorKind::kCorruptRecord: return "CorruptRecord";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kCheckpointFieldError: return "CheckpointFieldError";
    case ErrorKind::kConfigError: return "ConfigError";
  }
  return "Error";
}

std::string_view to_string(TestKind kind) { return enum_name(kind, kTestKinds); }
TestKind test_kind_from_string(std::string_view text) {
  return parse_enum(text, kTestKinds, "test kind");
}

std::string_view to_string(RequirementKind kind) {
  return enum_name(kind, kRequirementKinds);
}
RequirementKind requirement_kind_from_string(std::string_view text) {
  return parse_enum(text, kRequirementKinds, "requirement kind");
}

std::string_view to_string(Confidence confidence) {
  return enum_name(confidence, kConfidences);
}
Confidence confidence_from_string(std::string_view text) {
  return parse_enum(text, kConfidences, "confidence");
}

std::string_view to_string(Dialect dialect) {
  return enum_name(dialect, kDialects);
}
Dialect dialect_from_string(std::string_view text) {
  return parse_enum(text, kDialects, "dialect");
}

std::string_view to_string(TestStatus status) {
  return enum_name(status, kStatuses);
}
TestStatus test_status_from_string(std::string_view text) {
  return parse_enum(text, kStatuses, "test status");
}

std::string_view to_string(VerdictTag tag) { return enum_name(tag, kVerdicts); }
VerdictTag verdict_tag_from_string(std::string_view text) {
  return parse_enum(text, kVerdicts, "verdict");
}

std::string_view to_string(Outcome outcome) {
  return enum_name(outcome, kOutcomes);
}
Outcome outcome_from_string(std::string_view text) {
  return parse_enum(text, kOutcomes, "outcome");
}

TestKind TestCase::effective_kind() const {
  if (kind == TestKind::kAdversarial && adversarial_subkind) {
    return *adversarial_subkind;
  }
  return kind;
}

void check_test_case(const TestCase& test, const FunctionSignature& signature) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::kInvalidModel, "test " + test.id + ": " + why);
  };
  if (test.id.empty()) fail("empty id");
  if (test.kind == TestKind::kAdversarial) {
    if (!test.adversarial_subkind ||
        *test.adversarial_subkind == TestKind::kAdversarial) {
      fail("adversarial test needs a positive/neg_input/neg_output sub-kind");
    }
  } else if (test.adversarial_subkind) {
    fail("sub-kind set on a non-adversarial test");
  }
  switch (test.effective_kind()) {
    case TestKind::kPositive:
    case TestKind::kNegOutput:
      if (!test.output) fail("output required");
      break;
    case TestKind::kNegInput:
      if (test.output) fail("negative-input test must not carry an output");
      break;
    case TestKind::kAdversarial:
      break;
  }
  if (test.input.size() != signature.input_params.size()) {
    throw Error(ErrorKind::kArityMismatch,
                "test " + test.id + " has " +
                    std::to_string(test.input.size()) + " inputs, signature " +
                    std::to_string(signature.input_params.size()));
  }
}

bool natural_id_less(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

void TraceabilityMap::set(const TestId& test,
                          std::vector<RequirementLink> links) {
  entries_[test] = std::move(links);
}

const std::vector<RequirementLink>* TraceabilityMap::find(
    const TestId& test) const {
  auto it = entries_.find(test);
  return it == entries_.end() ? nullptr : &it->second;
}

RequirementIdSet TraceabilityMap::implicated(const TestId& test) const {
  RequirementIdSet out;
  if (const auto* links = find(test)) {
    for (const auto& link : *links) {
      if (link.validates) out.insert(link.requirement_id);
    }
  }
  return out;
}

void check_traceability(const TraceabilityMap& map,
                        const std::vector<TestCase>& suite,
                        const std::vector<AtomicRequirement>& requirements) {
  std::set<std::string> tests;
  for (const auto& t : suite) tests.insert(t.id);
  std::set<std::string> reqs;
  for (const auto& r : requirements) reqs.insert(r.id);
  for (const auto& [test, links] : map.entries()) {
    if (!tests.count(test)) {
      throw Error(ErrorKind::kInvalidModel, "map references unknown test " + test);
    }
    for (const auto& link : links) {
      if (!reqs.count(link.requirement_id)) {
        throw Error(ErrorKind::kInvalidModel,
                    "map references unknown requirement " + link.requirement_id);
      }
    }
  }
}

TestIdSet EvalReport::with_status(TestStatus status) const {
  TestIdSet out;
  for (const auto& r : results) {
    if (r.status == status) out.insert(r.test_id);
  }
  return out;
}

TestIdSet EvalReport::passing() const {
  TestIdSet out;
  for (const auto& r : results) {
    if (r.status == TestStatus::kLeanPass || r.status == TestStatus::kJudgePass) {
      out.insert(r.test_id);
    }
  }
  return out;
}

const TestResult* EvalReport::find(const TestId& id) const {
  for (const auto& r : results) {
    if (r.test_id == id) return &r;
  }
  return nullptr;
}

const TestCase* Checkpoint::find_test(const TestId& id) const {
  for (const auto* group : {&testcases, &negative_input_testcases,
                            &negative_output_testcases, &adversarial_testcases}) {
    for (const auto& t : *group) {
      if (t.id == id) return &t;
    }
  }
  return nullptr;
}

}  // namespace tracespec
