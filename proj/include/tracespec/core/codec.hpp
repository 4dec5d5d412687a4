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

// Canonical JSON encoding of the domain types. Objects keep insertion order
// and sets are written as sorted arrays, so equal values give equal bytes.

#ifndef TRACESPEC_CORE_CODEC_HPP_
#define TRACESPEC_CORE_CODEC_HPP_

#include <vector>

#include <nlohmann/json.hpp>

#include "tracespec/core/checkpoint.hpp"
#include "tracespec/core/model.hpp"

namespace tracespec {

using Json = nlohmann::ordered_json;

Json to_json(const FunctionSignature& signature);
FunctionSignature signature_from_json(const Json& json);

Json to_json(const OracleRef& oracle);
OracleRef oracle_from_json(const Json& json);

Json to_json(const Problem& problem);
Problem problem_from_json(const Json& json);

Json to_json(const AtomicRequirement& requirement);
AtomicRequirement requirement_from_json(const Json& json);
Json to_json(const std::vector<AtomicRequirement>& requirements);
std::vector<AtomicRequirement> requirements_from_json(const Json& json);

/// Full encoding carrying every TestCase field.
Json to_json(const TestCase& test);
TestCase test_case_from_json(const Json& json);

/// Checkpoint vocabulary: positive {input, output}, negative input {input},
/// negative output {input, wrong_output, correct_output}, adversarial
/// {input, expected_output, test_type}; all with id and description.
Json checkpoint_test_json(const TestCase& test);
TestCase checkpoint_test_from_json(const Json& json, TestKind array_kind);

Json inputs_to_json(const std::vector<Value>& inputs);
std::vector<Value> inputs_from_json(const Json& json);

Json to_json(const RequirementLink& link);
RequirementLink link_from_json(const Json& json);
Json to_json(const TraceabilityMap& map);
TraceabilityMap traceability_from_json(const Json& json);

Json to_json(const Specification& spec);
Specification spec_from_json(const Json& json);

Json to_json(const TestResult& result);
TestResult test_result_from_json(const Json& json);
Json to_json(const EvalReport& report);
EvalReport report_from_json(const Json& json);

Json to_json(const FeedbackDelta& delta);
FeedbackDelta delta_from_json(const Json& json);

Json to_json(const Trajectory& trajectory);
Trajectory trajectory_from_json(const Json& json);

Json to_json(const SpecAttempt& attempt);
SpecAttempt attempt_from_json(const Json& json);
Json to_json(const SpecEvalResult& result);
SpecEvalResult spec_eval_result_from_json(const Json& json);

Json to_json(const Checkpoint& checkpoint);
/// Throws Error(kCheckpointFieldError) naming the first malformed field.
Checkpoint checkpoint_from_json(const Json& json);

}  // namespace tracespec

#endif  // TRACESPEC_CORE_CODEC_HPP_
