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

#include "tracespec/llm/prompts.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>

#include "llm/templates_data.hpp"
#include "tracespec/core/error.hpp"

namespace tracespec::llm {

namespace {

constexpr std::array<std::pair<TaskKind, std::string_view>, 13> kTaskNames{{
    {TaskKind::kArDecomposition, "ar_decomposition"},
    {TaskKind::kDirectSpecgen, "direct_specgen"},
    {TaskKind::kSpecRefinement, "spec_refinement"},
    {TaskKind::kFeedbackGeneration, "feedback_generation"},
    {TaskKind::kSignatureGeneration, "signature_generation"},
    {TaskKind::kPositiveTestGen, "positive_test_gen"},
    {TaskKind::kNegativeInputTestGen, "negative_input_test_gen"},
    {TaskKind::kNegativeOutputTestGen, "negative_output_test_gen"},
    {TaskKind::kAdversarialTestGen, "adversarial_test_gen"},
    {TaskKind::kTestMapping, "test_mapping"},
    {TaskKind::kVerdictUnknown, "verdict_unknown"},
    {TaskKind::kJudgeReview, "judge_review"},
    {TaskKind::kOutputPerturbation, "output_perturbation"},
}};

constexpr PromptTemplate kJudgeReview{
    R"TPL(You review atomic requirements extracted from a programming problem.
A good requirement states one behavioral property, is precise, and can be
checked on a single input/output example.

You may rewrite unclear requirements, split compound ones, merge
duplicates, and add properties the problem states but the list misses.
Keep at least one requirement.)TPL",
    R"TPL(Review and improve the following requirements.

## Problem Description
{problem_description}

## Function Signature
{signature}

## Requirements
{requirements_json}

Return the revised list as a JSON array of objects with "id", "type"
("precondition" or "postcondition") and "description" fields. Return the
list unchanged if it needs no edits.)TPL",
    R"TPL(```json
{requirements_json}
```)TPL"};

constexpr PromptTemplate kOutputPerturbation{
    R"TPL(You produce wrong outputs for valid test inputs. A wrong output has the
declared output type, differs from the correct output, and violates the
given requirement.)TPL",
    R"TPL(Produce one wrong output for each reference test below.

## Problem Description
{problem_description}

## Function Signature
{signature}

## Requirement
{requirements_json}

## Reference Test Cases (with correct outputs)
{positive_tests_json}

Return a JSON array with one object per reference test, holding "input"
(copied unchanged), "wrong_output", and "description" (which requirement
the wrong output violates and how).)TPL",
    R"TPL(```json
{testcases_json}
```)TPL"};

bool is_ident_start(char c) {
  return std::islower(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident(char c) {
  return std::islower(static_cast<unsigned char>(c)) ||
         std::isdigit(static_cast<unsigned char>(c)) || c == '_';
}

struct Placeholder {
  std::size_t begin;
  std::size_t end;  // one past '}'
  std::string name;
  std::string format;  // text after ':' (may be empty)
};

std::optional<Placeholder> placeholder_at(std::string_view t, std::size_t i) {
  if (t[i] != '{' || i + 1 >= t.size() || !is_ident_start(t[i + 1])) {
    return std::nullopt;
  }
  std::size_t j = i + 1;
  while (j < t.size() && is_ident(t[j])) ++j;
  Placeholder p{i, 0, std::string(t.substr(i + 1, j - i - 1)), ""};
  if (j < t.size() && t[j] == ':') {
    std::size_t k = j + 1;
    while (k < t.size() && t[k] != '}' && t[k] != '\n' && t[k] != '{') ++k;
    p.format = std::string(t.substr(j + 1, k - j - 1));
    j = k;
  }
  if (j >= t.size() || t[j] != '}') return std::nullopt;
  p.end = j + 1;
  return p;
}

std::string apply_format(const std::string& value, const std::string& format) {
  if (format.empty()) return value;
  // Only fixed-point ".Nf" is understood.
  if (format.size() >= 3 && format.front() == '.' && format.back() == 'f') {
    int digits = std::atoi(format.substr(1, format.size() - 2).c_str());
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end && *end == '\0' && !value.empty()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", digits, v);
      return buf;
    }
  }
  return value;
}

}  // namespace

std::string_view to_string(TaskKind task) {
  for (const auto& [kind, name] : kTaskNames) {
    if (kind == task) return name;
  }
  return "?";
}

TaskKind task_kind_from_string(std::string_view name) {
  for (const auto& [kind, n] : kTaskNames) {
    if (n == name) return kind;
  }
  throw Error(ErrorKind::kUnknownTask, std::string(name));
}

const std::vector<TaskKind>& dataset_tasks() {
  static const std::vector<TaskKind> tasks = [] {
    std::vector<TaskKind> out;
    for (std::size_t i = 0; i < detail::kTaskTemplateCount; ++i) {
      out.push_back(kTaskNames[i].first);
    }
    return out;
  }();
  return tasks;
}

bool is_dataset_task(TaskKind task) {
  return task != TaskKind::kJudgeReview && task != TaskKind::kOutputPerturbation;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "?";
}

const PromptTemplate& prompt_template(TaskKind task) {
  static const std::vector<PromptTemplate> table = [] {
    std::vector<PromptTemplate> out;
    for (const auto& t : detail::kTaskTemplates) {
      out.push_back(PromptTemplate{t.system, t.user, t.response});
    }
    return out;
  }();
  if (task == TaskKind::kJudgeReview) return kJudgeReview;
  if (task == TaskKind::kOutputPerturbation) return kOutputPerturbation;
  auto index = static_cast<std::size_t>(task);
  if (index >= table.size()) {
    throw Error(ErrorKind::kUnknownTask, std::to_string(index));
  }
  return table[index];
}

std::vector<std::string> placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (auto p = placeholder_at(tmpl, i)) {
      bool seen = false;
      for (const auto& n : out) seen = seen || n == p->name;
      if (!seen) out.push_back(p->name);
      i = p->end - 1;
    }
  }
  return out;
}

std::string substitute(std::string_view tmpl, const PromptContext& context) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    auto p = placeholder_at(tmpl, i);
    if (!p) {
      out.push_back(tmpl[i++]);
      continue;
    }
    auto it = context.find(p->name);
    if (it == context.end()) {
      throw Error(ErrorKind::kMissingPlaceholder, p->name);
    }
    out += apply_format(it->second, p->format);
    i = p->end;
  }
  return out;
}

std::vector<ChatMessage> render(TaskKind task, const PromptContext& context) {
  const PromptTemplate& t = prompt_template(task);
  return {ChatMessage{Role::kSystem, std::string(t.system)},
          ChatMessage{Role::kUser, substitute(t.user, context)}};
}

std::string render_response(TaskKind task, const PromptContext& context) {
  return substitute(prompt_template(task).response, context);
}

}  // namespace tracespec::llm
