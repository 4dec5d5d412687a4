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

#include "tracespec/core/codec.hpp"

#include <string>

#include "tracespec/core/error.hpp"

namespace tracespec {

namespace {

const Json& field(const Json& json, const char* key) {
  if (!json.is_object()) {
    throw Error(ErrorKind::kInvalidModel,
                std::string("expected an object holding '") + key + "'");
  }
  auto it = json.find(key);
  if (it == json.end()) {
    throw Error(ErrorKind::kInvalidModel, std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string text_field(const Json& json, const char* key) {
  const auto& value = field(json, key);
  if (!value.is_string()) {
    throw Error(ErrorKind::kInvalidModel, std::string("field '") + key + "' is not text");
  }
  return value.get<std::string>();
}

std::string optional_text(const Json& json, const char* key) {
  auto it = json.find(key);
  if (it == json.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorKind::kInvalidModel, std::string("field '") + key + "' is not text");
  }
  return it->get<std::string>();
}

int int_field(const Json& json, const char* key) {
  const auto& value = field(json, key);
  if (!value.is_number_integer()) {
    throw Error(ErrorKind::kInvalidModel, std::string("field '") + key + "' is not an integer");
  }
  return value.get<int>();
}

bool bool_field(const Json& json, const char* key) {
  const auto& value = field(json, key);
  if (!value.is_boolean()) {
    throw Error(ErrorKind::kInvalidModel, std::string("field '") + key + "' is not boolean");
  }
  return value.get<bool>();
}

const Json& array_field(const Json& json, const char* key) {
  const auto& value = field(json, key);
  if (!value.is_array()) {
    throw Error(ErrorKind::kInvalidModel, std::string("field '") + key + "' is not an array");
  }
  return value;
}

std::optional<Value> optional_value(const Json& json, const char* key) {
  auto it = json.find(key);
  if (it == json.end() || it->is_null()) return std::nullopt;
  return value_from_json(*it);
}

template <typename T, typename Decode>
std::vector<T> decode_array(const Json& json, Decode decode) {
  if (!json.is_array()) throw Error(ErrorKind::kInvalidModel, "expected an array");
  std::vector<T> out;
  out.reserve(json.size());
  for (const auto& element : json) out.push_back(decode(element));
  return out;
}

}  // namespace

Json to_json(const FunctionSignature& signature) {
  Json params = Json::array();
  for (const auto& p : signature.input_params) {
    params.push_back(Json{{"name", p.name}, {"type", p.type_tag}});
  }
  return Json{{"function_name", signature.function_name},
              {"input_params", std::move(params)},
              {"output_type", signature.output_type}};
}

FunctionSignature signature_from_json(const Json& json) {
  FunctionSignature sig;
  sig.function_name = text_field(json, "function_name");
  for (const auto& p : array_field(json, "input_params")) {
    sig.input_params.push_back(Param{text_field(p, "name"), text_field(p, "type")});
  }
  sig.output_type = text_field(json, "output_type");
  std::set<std::string> names;
  for (const auto& p : sig.input_params) {
    if (!names.insert(p.name).second) {
      throw Error(ErrorKind::kInvalidModel, "duplicate parameter name " + p.name);
    }
  }
  return sig;
}

Json to_json(const OracleRef& oracle) {
  if (oracle.kind == OracleRef::Kind::kBuiltin) {
    return Json{{"builtin", oracle.builtin_name}};
  }
  return Json{{"command", oracle.argv}};
}

OracleRef oracle_from_json(const Json& json) {
  OracleRef oracle;
  if (json.is_object() && json.contains("builtin")) {
    oracle.kind = OracleRef::Kind::kBuiltin;
    oracle.builtin_name = text_field(json, "builtin");
    return oracle;
  }
  if (json.is_object() && json.contains("command")) {
    oracle.kind = OracleRef::Kind::kCommand;
    for (const auto& arg : array_field(json, "command")) {
      if (!arg.is_string()) throw Error(ErrorKind::kInvalidModel, "command argv must be text");
      oracle.argv.push_back(arg.get<std::string>());
    }
    if (oracle.argv.empty()) throw Error(ErrorKind::kInvalidModel, "empty oracle command");
    return oracle;
  }
  throw Error(ErrorKind::kInvalidModel, "oracle_ref needs 'builtin' or 'command'");
}

Json inputs_to_json(const std::vector<Value>& inputs) {
  Json out = Json::array();
  for (const auto& v : inputs) out.push_back(to_json(v));
  return out;
}

std::vector<Value> inputs_from_json(const Json& json) {
  return decode_array<Value>(json, [](const Json& j) { return value_from_json(j); });
}

Json to_json(const Problem& problem) {
  Json out{{"id", problem.id},
           {"description", problem.description},
           {"signature", to_json(problem.signature)},
           {"oracle_ref", to_json(problem.oracle)}};
  if (!problem.labeled_tests.empty()) {
    Json tests = Json::array();
    for (const auto& t : problem.labeled_tests) {
      tests.push_back(Json{{"input", inputs_to_json(t.input)}, {"output", to_json(t.output)}});
    }
    out["positive_tests"] = std::move(tests);
  }
  return out;
}

Problem problem_from_json(const Json& json) {
  Problem p;
  p.id = text_field(json, "id");
  p.description = text_field(json, "description");
  if (p.id.empty()) throw Error(ErrorKind::kInvalidModel, "problem id is empty");
  if (p.description.empty()) {
    throw Error(ErrorKind::kInvalidModel, "problem " + p.id + " has an empty description");
  }
  p.signature = signature_from_json(field(json, "signature"));
  p.oracle = oracle_from_json(field(json, "oracle_ref"));
  if (json.contains("positive_tests")) {
    for (const auto& t : array_field(json, "positive_tests")) {
      p.labeled_tests.push_back(
          LabeledExample{inputs_from_json(field(t, "input")), value_from_json(field(t, "output"))});
    }
  }
  return p;
}

Json to_json(const AtomicRequirement& requirement) {
  return Json{{"id", requirement.id},
              {"type", to_string(requirement.kind)},
              {"description", requirement.description}};
}

AtomicRequirement requirement_from_json(const Json& json) {
  AtomicRequirement r;
  r.id = text_field(json, "id");
  r.kind = requirement_kind_from_string(
      json.contains("type") ? text_field(json, "type") : text_field(json, "kind"));
  r.description = text_field(json, "description");
  return r;
}

Json to_json(const std::vector<AtomicRequirement>& requirements) {
  Json out = Json::array();
  for (const auto& r : requirements) out.push_back(to_json(r));
  return out;
}

std::vector<AtomicRequirement> requirements_from_json(const Json& json) {
  return decode_array<AtomicRequirement>(json, requirement_from_json);
}

Json to_json(const TestCase& test) {
  Json out{{"id", test.id}, {"kind", to_string(test.kind)}};
  if (test.adversarial_subkind) out["subkind"] = to_string(*test.adversarial_subkind);
  out["input"] = inputs_to_json(test.input);
  if (test.output) out["output"] = to_json(*test.output);
  out["description"] = test.description;
  if (test.source_requirement) out["source_requirement"] = *test.source_requirement;
  if (test.correct_output) out["correct_output"] = to_json(*test.correct_output);
  return out;
}

TestCase test_case_from_json(const Json& json) {
  TestCase t;
  t.id = text_field(json, "id");
  t.kind = test_kind_from_string(text_field(json, "kind"));
  if (json.contains("subkind")) t.adversarial_subkind = test_kind_from_string(text_field(json, "subkind"));
  t.input = inputs_from_json(field(json, "input"));
  t.output = optional_value(json, "output");
  t.description = optional_text(json, "description");
  if (json.contains("source_requirement")) t.source_requirement = text_field(json, "source_requirement");
  t.correct_output = optional_value(json, "correct_output");
  return t;
}

Json checkpoint_test_json(const TestCase& test) {
  Json out{{"id", test.id}, {"input", inputs_to_json(test.input)}};
  switch (test.kind) {
    case TestKind::kPositive:
      if (test.output) out["output"] = to_json(*test.output);
      break;
    case TestKind::kNegInput:
      break;
    case TestKind::kNegOutput:
      if (test.output) out["wrong_output"] = to_json(*test.output);
      if (test.correct_output) out["correct_output"] = to_json(*test.correct_output);
      break;
    case TestKind::kAdversarial:
      if (test.output) out["expected_output"] = to_json(*test.output);
      if (test.correct_output) out["correct_output"] = to_json(*test.correct_output);
      if (test.adversarial_subkind) out["test_type"] = to_string(*test.adversarial_subkind);
      break;
  }
  out["description"] = test.description;
  if (test.source_requirement) out["requirement"] = *test.source_requirement;
  return out;
}

TestCase checkpoint_test_from_json(const Json& json, TestKind array_kind) {
  TestCase t;
  t.id = text_field(json, "id");
  t.kind = array_kind;
  t.input = inputs_from_json(field(json, "input"));
  switch (array_kind) {
    case TestKind::kPositive:
      t.output = value_from_json(field(json, "output"));
      break;
    case TestKind::kNegInput:
      break;
    case TestKind::kNegOutput:
      t.output = value_from_json(field(json, "wrong_output"));
      t.correct_output = optional_value(json, "correct_output");
      break;
    case TestKind::kAdversarial:
      t.output = optional_value(json, "expected_output");
      t.correct_output = optional_value(json, "correct_output");
      t.adversarial_subkind = test_kind_from_string(text_field(json, "test_type"));
      break;
  }
  t.description = optional_text(json, "description");
  if (json.contains("requirement")) t.source_requirement = text_field(json, "requirement");
  return t;
}

Json to_json(const RequirementLink& link) {
  return Json{{"requirement_id", link.requirement_id},
              {"validates", link.validates},
              {"confidence", to_string(link.confidence)},
              {"reason", link.reason}};
}

RequirementLink link_from_json(const Json& json) {
  RequirementLink link;
  link.requirement_id = text_field(json, "requirement_id");
  link.validates = bool_field(json, "validates");
  link.confidence = confidence_from_string(text_field(json, "confidence"));
  link.reason = optional_text(json, "reason");
  return link;
}

Json to_json(const TraceabilityMap& map) {
  Json out = Json::object();
  for (const auto& [test, links] : map.entries()) {
    Json array = Json::array();
    for (const auto& link : links) array.push_back(to_json(link));
    out[test] = std::move(array);
  }
  return out;
}

TraceabilityMap traceability_from_json(const Json& json) {
  if (!json.is_object()) throw Error(ErrorKind::kInvalidModel, "traceability map must be an object");
  TraceabilityMap map;
  for (const auto& [test, links] : json.items()) {
    map.set(test, decode_array<RequirementLink>(links, link_from_json));
  }
  return map;
}

Json to_json(const Specification& spec) {
  return Json{{"imports", spec.imports},       {"precond_aux", spec.precond_aux},
              {"precond", spec.precond},       {"postcond_aux", spec.postcond_aux},
              {"postcond", spec.postcond},     {"dialect", to_string(spec.dialect)}};
}

Specification spec_from_json(const Json& json) {
  Specification spec;
  spec.imports = optional_text(json, "imports");
  spec.precond_aux = optional_text(json, "precond_aux");
  spec.precond = text_field(json, "precond");
  spec.postcond_aux = optional_text(json, "postcond_aux");
  spec.postcond = text_field(json, "postcond");
  spec.dialect = json.contains("dialect") ? dialect_from_string(text_field(json, "dialect"))
                                          : Dialect::kMini;
  return spec;
}

Json to_json(const TestResult& result) {
  return Json{{"test_id", result.test_id},
              {"status", to_string(result.status)},
              {"prover_verdict", to_string(result.prover_verdict)},
              {"diagnostics", result.diagnostics},
              {"component", result.component},
              {"judge_answer", result.judge_answer},
              {"llm_reasoning", result.llm_reasoning}};
}

TestResult test_result_from_json(const Json& json) {
  TestResult r;
  r.test_id = text_field(json, "test_id");
  r.status = test_status_from_string(text_field(json, "status"));
  r.prover_verdict = verdict_tag_from_string(text_field(json, "prover_verdict"));
  r.diagnostics = optional_text(json, "diagnostics");
  r.component = optional_text(json, "component");
  r.judge_answer = optional_text(json, "judge_answer");
  r.llm_reasoning = optional_text(json, "llm_reasoning");
  return r;
}

Json to_json(const EvalReport& report) {
  Json results = Json::array();
  for (const auto& r : report.results) results.push_back(to_json(r));
  return Json{{"results", std::move(results)}};
}

EvalReport report_from_json(const Json& json) {
  EvalReport report;
  report.results = decode_array<TestResult>(array_field(json, "results"), test_result_from_json);
  return report;
}

Json to_json(const FeedbackDelta& delta) {
  Json reps = Json::array();
  for (const auto& r : delta.representative_tests) {
    reps.push_back(Json{{"test_id", r.test_id}, {"note", r.note}});
  }
  return Json{{"iteration", delta.iteration},
              {"implicated_requirements", delta.implicated_requirements},
              {"representative_tests", std::move(reps)},
              {"feedback_text", delta.feedback_text},
              {"analysis", delta.analysis},
              {"quality_score", delta.quality_score}};
}

FeedbackDelta delta_from_json(const Json& json) {
  FeedbackDelta d;
  d.iteration = int_field(json, "iteration");
  for (const auto& id : array_field(json, "implicated_requirements")) {
    d.implicated_requirements.insert(id.get<std::string>());
  }
  for (const auto& r : array_field(json, "representative_tests")) {
    d.representative_tests.push_back({text_field(r, "test_id"), text_field(r, "note")});
  }
  d.feedback_text = text_field(json, "feedback_text");
  d.analysis = optional_text(json, "analysis");
  d.quality_score = field(json, "quality_score").get<double>();
  return d;
}

Json to_json(const Trajectory& trajectory) {
  Json suite = Json::array();
  for (const auto& t : trajectory.suite) suite.push_back(to_json(t));
  Json steps = Json::array();
  for (const auto& s : trajectory.steps) {
    Json step{{"spec", to_json(s.spec)}, {"report", to_json(s.report)}};
    if (s.delta) step["delta"] = to_json(*s.delta);
    steps.push_back(std::move(step));
  }
  Json out{{"problem", to_json(trajectory.problem)},
           {"raw_requirements", to_json(trajectory.raw_requirements)},
           {"requirements", to_json(trajectory.requirements)},
           {"suite", std::move(suite)},
           {"map", to_json(trajectory.map)},
           {"steps", std::move(steps)}};
  if (trajectory.final_spec) out["final_spec"] = to_json(*trajectory.final_spec);
  out["verified"] = trajectory.verified;
  out["outcome"] = to_string(trajectory.outcome);
  out["error_message"] = trajectory.error_message;
  return out;
}

Trajectory trajectory_from_json(const Json& json) {
  Trajectory t;
  t.problem = problem_from_json(field(json, "problem"));
  t.raw_requirements = requirements_from_json(field(json, "raw_requirements"));
  t.requirements = requirements_from_json(field(json, "requirements"));
  t.suite = decode_array<TestCase>(field(json, "suite"), test_case_from_json);
  t.map = traceability_from_json(field(json, "map"));
  for (const auto& s : array_field(json, "steps")) {
    TrajectoryStep step;
    step.spec = spec_from_json(field(s, "spec"));
    step.report = report_from_json(field(s, "report"));
    if (s.contains("delta")) step.delta = delta_from_json(s["delta"]);
    t.steps.push_back(std::move(step));
  }
  if (json.contains("final_spec")) t.final_spec = spec_from_json(json["final_spec"]);
  t.verified = bool_field(json, "verified");
  t.outcome = outcome_from_string(text_field(json, "outcome"));
  t.error_message = optional_text(json, "error_message");
  return t;
}

Json to_json(const SpecAttempt& attempt) {
  Json out{{"iteration", attempt.iteration},
           {"spec", to_json(attempt.spec)},
           {"feedback", attempt.feedback},
           {"informalized_feedback", attempt.informalized_feedback}};
  if (attempt.quality_score) out["quality_score"] = *attempt.quality_score;
  return out;
}

SpecAttempt attempt_from_json(const Json& json) {
  SpecAttempt a;
  a.iteration = int_field(json, "iteration");
  a.spec = spec_from_json(field(json, "spec"));
  a.feedback = text_field(json, "feedback");
  a.informalized_feedback = optional_text(json, "informalized_feedback");
  if (json.contains("quality_score")) {
    const auto& score = json["quality_score"];
    if (!score.is_number()) throw Error(ErrorKind::kInvalidModel, "quality_score is not a number");
    a.quality_score = score.get<double>();
  }
  return a;
}

Json to_json(const SpecEvalResult& result) {
  return Json{{"iteration", result.iteration},
              {"test_id", result.test_id},
              {"test_type", result.test_type},
              {"result_status", result.result_status},
              {"status", to_string(result.status)},
              {"component", result.component},
              {"eval_result", result.eval_result},
              {"llm_reasoning", result.llm_reasoning},
              {"spec", to_json(result.spec)}};
}

SpecEvalResult spec_eval_result_from_json(const Json& json) {
  SpecEvalResult r;
  r.iteration = int_field(json, "iteration");
  r.test_id = text_field(json, "test_id");
  r.test_type = text_field(json, "test_type");
  r.result_status = text_field(json, "result_status");
  if (r.result_status != "pass" && r.result_status != "fail" && r.result_status != "unknown") {
    throw Error(ErrorKind::kInvalidModel, "bad result_status '" + r.result_status + "'");
  }
  r.status = test_status_from_string(text_field(json, "status"));
  r.component = optional_text(json, "component");
  r.eval_result = optional_text(json, "eval_result");
  r.llm_reasoning = optional_text(json, "llm_reasoning");
  r.spec = spec_from_json(field(json, "spec"));
  return r;
}

namespace {

Json tests_json(const std::vector<TestCase>& tests) {
  Json out = Json::array();
  for (const auto& t : tests) out.push_back(checkpoint_test_json(t));
  return out;
}

// Runs `decode`, converting any failure into a CheckpointFieldError that
// names `name`.
template <typename Decode>
auto checkpoint_field(const char* name, Decode decode) -> decltype(decode()) {
  try {
    return decode();
  } catch (const Error& e) {
    throw Error(ErrorKind::kCheckpointFieldError, std::string(name) + ": " + e.detail());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kCheckpointFieldError, std::string(name) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Checkpoint& checkpoint) {
  Json out{{"problem_id", checkpoint.problem_id}, {"step_index", checkpoint.step_index}};
  if (checkpoint.problem_description) out["problem_description"] = *checkpoint.problem_description;
  if (checkpoint.informal_requirements) {
    out["informal_requirements"] = to_json(*checkpoint.informal_requirements);
  }
  if (checkpoint.signature) out["signature"] = to_json(*checkpoint.signature);
  out["testcases"] = tests_json(checkpoint.testcases);
  out["negative_input_testcases"] = tests_json(checkpoint.negative_input_testcases);
  out["negative_output_testcases"] = tests_json(checkpoint.negative_output_testcases);
  out["adversarial_testcases"] = tests_json(checkpoint.adversarial_testcases);
  if (checkpoint.testcase_ar_mapping_detailed) {
    out["testcase_ar_mapping_detailed"] = to_json(*checkpoint.testcase_ar_mapping_detailed);
  }
  if (checkpoint.spec) out["spec"] = to_json(*checkpoint.spec);
  Json attempts = Json::array();
  for (const auto& a : checkpoint.spec_attempts) attempts.push_back(to_json(a));
  out["spec_attempts"] = std::move(attempts);
  Json results = Json::array();
  for (const auto& r : checkpoint.spec_eval) results.push_back(to_json(r));
  out["spec_eval"] = Json{{"results", std::move(results)}};
  if (checkpoint.outcome) out["outcome"] = to_string(*checkpoint.outcome);
  return out;
}

Checkpoint checkpoint_from_json(const Json& json) {
  Checkpoint c;
  c.problem_id = checkpoint_field("problem_id", [&] { return text_field(json, "problem_id"); });
  c.step_index = checkpoint_field("step_index", [&] { return int_field(json, "step_index"); });
  if (json.contains("problem_description")) {
    c.problem_description = checkpoint_field(
        "problem_description", [&] { return text_field(json, "problem_description"); });
  }
  if (json.contains("informal_requirements")) {
    c.informal_requirements = checkpoint_field(
        "informal_requirements", [&] { return requirements_from_json(json["informal_requirements"]); });
  }
  if (json.contains("signature")) {
    c.signature = checkpoint_field("signature", [&] { return signature_from_json(json["signature"]); });
  }
  auto tests = [&](const char* key, TestKind kind) {
    if (!json.contains(key)) return std::vector<TestCase>{};
    return checkpoint_field(key, [&] {
      return decode_array<TestCase>(json[key], [&](const Json& j) {
        return checkpoint_test_from_json(j, kind);
      });
    });
  };
  c.testcases = tests("testcases", TestKind::kPositive);
  c.negative_input_testcases = tests("negative_input_testcases", TestKind::kNegInput);
  c.negative_output_testcases = tests("negative_output_testcases", TestKind::kNegOutput);
  c.adversarial_testcases = tests("adversarial_testcases", TestKind::kAdversarial);
  if (json.contains("testcase_ar_mapping_detailed")) {
    c.testcase_ar_mapping_detailed = checkpoint_field("testcase_ar_mapping_detailed", [&] {
      return traceability_from_json(json["testcase_ar_mapping_detailed"]);
    });
  }
  if (json.contains("spec")) {
    c.spec = checkpoint_field("spec", [&] { return spec_from_json(json["spec"]); });
  }
  if (json.contains("spec_attempts")) {
    c.spec_attempts = checkpoint_field("spec_attempts", [&] {
      return decode_array<SpecAttempt>(json["spec_attempts"], attempt_from_json);
    });
  }
  if (json.contains("spec_eval")) {
    c.spec_eval = checkpoint_field("spec_eval", [&] {
      return decode_array<SpecEvalResult>(array_field(json["spec_eval"], "results"),
                                          spec_eval_result_from_json);
    });
  }
  if (json.contains("outcome")) {
    c.outcome = checkpoint_field("outcome", [&] { return outcome_from_string(text_field(json, "outcome")); });
  }
  return c;
}

}  // namespace tracespec
