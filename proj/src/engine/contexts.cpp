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

#include "tracespec/engine/contexts.hpp"

#include <cctype>
#include <cstdio>
#include <regex>
#include <sstream>

#include "tracespec/core/codec.hpp"
#include "tracespec/core/error.hpp"
#include "tracespec/llm/parse.hpp"
#include "tracespec/prover/minispec.hpp"
#include "tracespec/prover/prover.hpp"

namespace tracespec::engine {

namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::string labeled_tests_text(const std::vector<TestCase>& tests) {
  Json out = Json::array();
  for (const auto& t : tests) {
    Json j{{"input", inputs_to_json(t.input)}};
    j["output"] = t.output ? to_json(*t.output) : Json();
    j["description"] = t.description;
    out.push_back(std::move(j));
  }
  return out.dump(2);
}

}  // namespace

std::string signature_text(const FunctionSignature& signature) {
  return to_json(signature).dump(2);
}

std::string requirements_text(const std::vector<AtomicRequirement>& requirements) {
  return to_json(requirements).dump(2);
}

std::string spec_text(const Specification& spec) {
  llm::PromptContext fields{{"imports", spec.imports},
                            {"precond_aux", spec.precond_aux},
                            {"precond", spec.precond},
                            {"postcond_aux", spec.postcond_aux},
                            {"postcond", spec.postcond}};
  return llm::render_response(llm::TaskKind::kDirectSpecgen, fields);
}

std::string inputs_text(const std::vector<Value>& input) {
  return inputs_to_json(input).dump();
}

std::string output_text(const std::optional<Value>& output) {
  return output ? to_text(*output) : "None";
}

std::string judge_component(TestKind effective_kind) {
  return effective_kind == TestKind::kNegInput ? "precondition" : "postcondition";
}

std::string task_template(const FunctionSignature& signature, Dialect dialect) {
  std::ostringstream out;
  const auto& fn = signature.function_name;
  if (dialect == Dialect::kMini) {
    out << "-- MiniSpec: prefix s-expressions over the parameters";
    for (const auto& p : signature.input_params) out << " " << p.name;
    out << " and the result y\n";
    for (const auto& p : signature.input_params) {
      out << "-- " << p.name << " : " << p.type_tag << "\n";
    }
    out << "-- y : " << signature.output_type << "\n"
        << "-- operators: = != < <= > >= + - * and or not => len count member nth\n"
        << "--            (forall x xs body) (list ...)\n\n"
        << "precond " << fn << " :=\n  {{precond}}\n\n"
        << "postcond " << fn << " :=\n  {{postcond}}";
    return out.str();
  }
  std::string binders;
  for (const auto& p : signature.input_params) {
    binders += " (" + p.name + " : " + prover::lean_type(p.type_tag) + ")";
  }
  out << "{{imports}}\n\n"
      << "{{precond_aux}}\n\n"
      << "@[reducible, simp]\n"
      << "def " << fn << "_precond" << binders << " : Prop :=\n"
      << "  {{precond}}\n\n"
      << "{{postcond_aux}}\n\n"
      << "@[reducible, simp]\n"
      << "def " << fn << "_postcond" << binders << " (result : "
      << prover::lean_type(signature.output_type) << ") : Prop :=\n"
      << "  {{postcond}}";
  return out.str();
}

std::string requirement_digest(const std::vector<AtomicRequirement>& requirements,
                               RequirementKind kind) {
  std::string out;
  for (const auto& r : requirements) {
    if (r.kind != kind) continue;
    if (!out.empty()) out += "\n";
    out += "- " + r.id + ": " + r.description;
  }
  return out.empty() ? "None" : out;
}

Specification spec_from_reply(std::string_view reply, Dialect dialect) {
  std::string body = llm::fenced_block(reply, "lean").value_or(std::string(reply));
  llm::Fields fields;
  try {
    fields = llm::parse_fielded(body);
  } catch (const Error& e) {
    throw Error(ErrorKind::kParseFailure, e.what());
  }
  auto get = [&](std::string_view name) {
    const std::string* v = llm::find_field(fields, name);
    return v ? trimmed(*v) : std::string();
  };
  Specification spec;
  spec.dialect = dialect;
  spec.precond = get("precond");
  spec.postcond = get("postcond");
  if (spec.postcond.empty()) {
    throw Error(ErrorKind::kParseFailure, "empty postcond");
  }
  if (dialect == Dialect::kLean) {
    spec.imports = get("imports");
    spec.precond_aux = get("precond_aux");
    spec.postcond_aux = get("postcond_aux");
    return spec;
  }
  for (const auto* clause : {&spec.precond, &spec.postcond}) {
    if (clause->empty()) continue;
    try {
      prover::parse_minispec(*clause);
    } catch (const Error& e) {
      throw Error(ErrorKind::kParseFailure, e.what());
    }
  }
  return spec;
}

llm::PromptContext decomposition_context(const Problem& problem) {
  return {{"problem_description", problem.description},
          {"signature", signature_text(problem.signature)}};
}

llm::PromptContext review_context(const Problem& problem,
                                  const std::vector<AtomicRequirement>& raw) {
  auto ctx = decomposition_context(problem);
  ctx["requirements_json"] = requirements_text(raw);
  return ctx;
}

llm::PromptContext test_gen_context(const Problem& problem,
                                    const std::vector<AtomicRequirement>& requirements) {
  return review_context(problem, requirements);
}

llm::PromptContext perturbation_context(const Problem& problem,
                                        const std::vector<AtomicRequirement>& requirements,
                                        const std::vector<TestCase>& labeled) {
  auto ctx = review_context(problem, requirements);
  ctx["positive_tests_json"] = labeled_tests_text(labeled);
  return ctx;
}

llm::PromptContext mapping_context(const std::vector<AtomicRequirement>& requirements,
                                   const TestCase& test) {
  return {{"requirements_json", requirements_text(requirements)},
          {"test_input", inputs_text(test.input)},
          {"test_output", output_text(test.output)}};
}

llm::PromptContext specgen_context(const Problem& problem,
                                   const std::vector<AtomicRequirement>& requirements,
                                   Dialect dialect) {
  return {{"task_description", problem.description},
          {"task_template", task_template(problem.signature, dialect)},
          {"precond_desc",
           requirement_digest(requirements, RequirementKind::kPrecondition)},
          {"postcond_desc",
           requirement_digest(requirements, RequirementKind::kPostcondition)}};
}

llm::PromptContext feedback_context(const Problem& problem,
                                    const std::vector<AtomicRequirement>& requirements,
                                    const Specification& failed,
                                    std::optional<double> quality_score) {
  char score[64];
  std::snprintf(score, sizeof score, "%.17g", quality_score.value_or(0.0));
  return {{"problem_description", problem.description},
          {"requirements_json", requirements_text(requirements)},
          {"failed_spec", spec_text(failed)},
          {"quality_score", score}};
}

llm::PromptContext refinement_context(const Problem& problem,
                                      const std::vector<AtomicRequirement>& requirements,
                                      const Specification& failed,
                                      const std::string& feedback) {
  auto ctx = review_context(problem, requirements);
  ctx["failed_spec"] = spec_text(failed);
  ctx["feedback"] = feedback;
  return ctx;
}

llm::PromptContext adversarial_context(const Problem& problem,
                                       const std::vector<AtomicRequirement>& requirements,
                                       const Specification& spec) {
  auto ctx = review_context(problem, requirements);
  ctx["spec"] = spec_text(spec);
  return ctx;
}

llm::PromptContext judge_context(const Specification& spec, const TestCase& test) {
  TestKind kind = test.effective_kind();
  return {{"component", judge_component(kind)},
          {"spec", spec_text(spec)},
          {"test_type", std::string(to_string(kind))},
          {"test_input", inputs_text(test.input)},
          {"test_output", output_text(test.output)}};
}

std::optional<bool> judge_answer(std::string_view reply) {
  static const std::regex re(R"(answer\s*:\s*\**\s*(true|false))",
                             std::regex::icase);
  std::optional<bool> answer;
  std::string text(reply);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    std::string word = (*it)[1];
    answer = std::toupper(static_cast<unsigned char>(word[0])) == 'T';
  }
  return answer;
}

std::string judge_reasoning(std::string_view reply) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(reply)};
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  while (!lines.empty() && trimmed(lines.back()).empty()) lines.pop_back();
  if (!lines.empty() && judge_answer(lines.back())) lines.pop_back();
  std::size_t first = 0;
  while (first < lines.size() && trimmed(lines[first]).empty()) ++first;
  if (first < lines.size() && trimmed(lines[first]).rfind("Let me analyze", 0) == 0) {
    ++first;
  }
  std::string out;
  for (std::size_t i = first; i < lines.size(); ++i) {
    out += lines[i];
    if (i + 1 < lines.size()) out += "\n";
  }
  return trimmed(out);
}

}  // namespace tracespec::engine
