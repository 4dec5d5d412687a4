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

// Prompt contexts built from domain values. The engine renders its calls
// through these and the distillery rebuilds them from checkpoints, so both
// sides produce identical prompt bytes.

#ifndef TRACESPEC_ENGINE_CONTEXTS_HPP_
#define TRACESPEC_ENGINE_CONTEXTS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tracespec/core/model.hpp"
#include "tracespec/llm/prompts.hpp"

namespace tracespec::engine {

/// Pretty JSON {function_name, input_params:[{name, type}], output_type}.
std::string signature_text(const FunctionSignature& signature);
/// Pretty JSON array of {id, type, description}.
std::string requirements_text(const std::vector<AtomicRequirement>& requirements);
/// The five spec fields in fielded form.
std::string spec_text(const Specification& spec);
/// Compact JSON array of the arguments.
std::string inputs_text(const std::vector<Value>& input);
/// Compact JSON of the value, or "None".
std::string output_text(const std::optional<Value>& output);
/// "precondition" for negative-input tests, "postcondition" otherwise.
std::string judge_component(TestKind effective_kind);

/// Code skeleton with {{imports}}, {{precond}}, ... holes.
std::string task_template(const FunctionSignature& signature, Dialect dialect);
/// Bullet list of the requirements of one kind, or "None".
std::string requirement_digest(const std::vector<AtomicRequirement>& requirements,
                               RequirementKind kind);

/// Decodes a specification reply: the first ```lean block if any, else the
/// whole text, in fielded form. Fields are whitespace-trimmed; mini specs
/// drop imports/aux text and must parse. Throws Error(kParseFailure).
Specification spec_from_reply(std::string_view reply, Dialect dialect);

llm::PromptContext decomposition_context(const Problem& problem);
llm::PromptContext review_context(const Problem& problem,
                                  const std::vector<AtomicRequirement>& raw);
llm::PromptContext test_gen_context(const Problem& problem,
                                    const std::vector<AtomicRequirement>& requirements);
llm::PromptContext perturbation_context(const Problem& problem,
                                        const std::vector<AtomicRequirement>& requirements,
                                        const std::vector<TestCase>& labeled);
llm::PromptContext mapping_context(const std::vector<AtomicRequirement>& requirements,
                                   const TestCase& test);
llm::PromptContext specgen_context(const Problem& problem,
                                   const std::vector<AtomicRequirement>& requirements,
                                   Dialect dialect);
llm::PromptContext feedback_context(const Problem& problem,
                                    const std::vector<AtomicRequirement>& requirements,
                                    const Specification& failed,
                                    std::optional<double> quality_score);
llm::PromptContext refinement_context(const Problem& problem,
                                      const std::vector<AtomicRequirement>& requirements,
                                      const Specification& failed,
                                      const std::string& feedback);
llm::PromptContext adversarial_context(const Problem& problem,
                                       const std::vector<AtomicRequirement>& requirements,
                                       const Specification& spec);
llm::PromptContext judge_context(const Specification& spec, const TestCase& test);

/// Verdict line of a judge reply ("**Answer: TRUE**"); the last one wins.
std::optional<bool> judge_answer(std::string_view reply);
/// Judge reply with the leading "Let me analyze ..." line and the final
/// answer line removed, trimmed.
std::string judge_reasoning(std::string_view reply);

}  // namespace tracespec::engine

#endif  // TRACESPEC_ENGINE_CONTEXTS_HPP_
