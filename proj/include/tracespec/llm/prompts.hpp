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

// Task kinds and prompt rendering. Templates use single-brace {name}
// placeholders; only the names a template declares are substituted, so
// literal braces elsewhere survive untouched.

#ifndef TRACESPEC_LLM_PROMPTS_HPP_
#define TRACESPEC_LLM_PROMPTS_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tracespec::llm {

enum class TaskKind {
  kArDecomposition,
  kDirectSpecgen,
  kSpecRefinement,
  kFeedbackGeneration,
  kSignatureGeneration,
  kPositiveTestGen,
  kNegativeInputTestGen,
  kNegativeOutputTestGen,
  kAdversarialTestGen,
  kTestMapping,
  kVerdictUnknown,
  // Helper prompts; not dataset tasks.
  kJudgeReview,
  kOutputPerturbation,
};

std::string_view to_string(TaskKind task);
/// Throws Error(kUnknownTask).
TaskKind task_kind_from_string(std::string_view name);

/// The eleven dataset tasks in table order.
const std::vector<TaskKind>& dataset_tasks();
bool is_dataset_task(TaskKind task);

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using PromptContext = std::map<std::string, std::string>;

struct PromptTemplate {
  std::string_view system;
  std::string_view user;
  /// Assistant-side shape used when distilling examples.
  std::string_view response;
};

const PromptTemplate& prompt_template(TaskKind task);

/// Placeholder names of the user template, in order of first appearance.
std::vector<std::string> placeholders(std::string_view tmpl);

/// Substitutes every placeholder occurring in `tmpl`. A `{name:.2f}` form
/// formats a numeric value with two decimals. Throws
/// Error(kMissingPlaceholder) naming the first absent key.
std::string substitute(std::string_view tmpl, const PromptContext& context);

/// [system, user]; the system text is emitted as written, placeholders are
/// filled in the user text only.
std::vector<ChatMessage> render(TaskKind task, const PromptContext& context);

/// Fills the task's response template.
std::string render_response(TaskKind task, const PromptContext& context);

}  // namespace tracespec::llm

#endif  // TRACESPEC_LLM_PROMPTS_HPP_
