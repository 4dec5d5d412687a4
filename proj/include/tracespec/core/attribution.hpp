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

// Failure attribution: which tests fail under a report, and which
// requirements those failures implicate through the traceability map.

#ifndef TRACESPEC_CORE_ATTRIBUTION_HPP_
#define TRACESPEC_CORE_ATTRIBUTION_HPP_

#include <vector>

#include "tracespec/core/model.hpp"

namespace tracespec {

/// lean_fail ∪ judge_fail.
TestIdSet failing_tests(const EvalReport& report);

/// Union of pi(t) over `failing`. Only validates=true links count; a failing
/// test without one raises Error(kUnmappedTest).
RequirementIdSet lift_failing_requirements(const TestIdSet& failing,
                                           const TraceabilityMap& map);

/// Accepts iff the four status partitions are disjoint, cover exactly the
/// suite ids, and every status agrees with the recorded prover verdict
/// (judge_* only after Unknown). Throws Error(kPartitionViolation) naming the
/// offending test id.
void validate_report(const EvalReport& report,
                     const std::vector<TestCase>& suite);

}  // namespace tracespec

#endif  // TRACESPEC_CORE_ATTRIBUTION_HPP_
