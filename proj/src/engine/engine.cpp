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

#include "tracespec/engine/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include "tracespec/core/attribution.hpp"
#include "tracespec/core/codec.hpp"
#include "tracespec/core/error.hpp"
#include "tracespec/engine/contexts.hpp"
#include "tracespec/engine/oracle.hpp"
#include "tracespec/llm/parse.hpp"

namespace tracespec::engine {

namespace {

using llm::TaskKind;

Json reply_json(std::string_view reply) {
  try {
    return llm::parse_structured_block(reply);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoBlockFound) throw;
  }
  try {
    return Json::parse(reply);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kDecodeError, e.what());
  }
}

/// The list of records inside a reply: a bare array, or the first array
/// member of an object, or a lone object.
std::vector<Json> reply_items(const Json& json) {
  if (json.is_array()) return {json.begin(), json.end()};
  if (json.is_object()) {
    for (const auto& [key, value] : json.items()) {
      if (value.is_array()) return {value.begin(), value.end()};
    }
    return {json};
  }
  throw Error(ErrorKind::kDecodeError, "expected an array or object");
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<RequirementKind> requirement_kind(const Json& item) {
  for (const char* key : {"type", "kind"}) {
    if (!item.contains(key) || !item[key].is_string()) continue;
    std::string t = lower(item[key].get<std::string>());
    if (t.rfind("pre", 0) == 0) return RequirementKind::kPrecondition;
    if (t.rfind("post", 0) == 0) return RequirementKind::kPostcondition;
  }
  return std::nullopt;
}

std::vector<AtomicRequirement> decode_requirements(std::string_view reply) {
  std::vector<AtomicRequirement> out;
  for (const auto& item : reply_items(reply_json(reply))) {
    if (!item.is_object()) throw Error(ErrorKind::kDecodeError, "requirement is not an object");
    auto kind = requirement_kind(item);
    if (!kind || !item.contains("description") || !item["description"].is_string()) {
      throw Error(ErrorKind::kDecodeError, "requirement needs type and description");
    }
    AtomicRequirement r;
    r.kind = *kind;
    r.description = item["description"].get<std::string>();
    if (item.contains("id") && item["id"].is_string()) r.id = item["id"].get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<Value> json_value(const Json& json) {
  try {
    return value_from_json(json);
  } catch (const Error&) {
    return std::nullopt;
  }
}

const Json* first_of(const Json& item, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (item.contains(k) && !item[k].is_null()) return &item[k];
  }
  return nullptr;
}

std::string text_of(const Json& item, const char* key) {
  if (item.contains(key) && item[key].is_string()) return item[key].get<std::string>();
  return "";
}

bool same_test(const TestCase& a, const TestCase& b) {
  return a.effective_kind() == b.effective_kind() && a.input == b.input &&
         (a.effective_kind() == TestKind::kNegInput || a.output == b.output);
}

bool duplicated(const TestCase& t, const std::vector<TestCase>& pool) {
  return std::any_of(pool.begin(), pool.end(),
                     [&](const TestCase& o) { return same_test(t, o); });
}

std::optional<bool> link_validates(const Json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    std::string s = lower(v.get<std::string>());
    if (s == "true" || s == "yes" || s == "validates") return true;
    if (s == "false" || s == "no" || s.find("not") != std::string::npos) return false;
  }
  return std::nullopt;
}

Confidence link_confidence(const Json& item) {
  std::string c = lower(text_of(item, "confidence"));
  if (c == "high") return Confidence::kHigh;
  if (c == "low") return Confidence::kLow;
  return Confidence::kMedium;
}

std::vector<RequirementLink> decode_links(std::string_view reply) {
  Json json = reply_json(reply);
  std::vector<std::pair<std::string, Json>> rows;
  bool keyed = json.is_object() && !json.empty() &&
               std::all_of(json.begin(), json.end(),
                           [](const Json& v) { return v.is_object(); }) &&
               !json.contains("requirement_id");
  if (keyed) {
    for (const auto& [key, value] : json.items()) rows.emplace_back(key, value);
  } else {
    for (const auto& item : reply_items(json)) {
      if (!item.is_object()) continue;
      std::string id = text_of(item, "requirement_id");
      if (id.empty()) id = text_of(item, "req_id");
      if (id.empty()) id = text_of(item, "id");
      rows.emplace_back(id, item);
    }
  }
  std::vector<RequirementLink> links;
  for (const auto& [id, item] : rows) {
    const Json* v = first_of(item, {"validates", "status"});
    auto validates = v ? link_validates(*v) : std::nullopt;
    if (id.empty() || !validates) continue;
    links.push_back(RequirementLink{id, *validates, link_confidence(item),
                                    text_of(item, "reason")});
  }
  return links;
}

}  // namespace

void EngineConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kConfigError, what);
  };
  need(max_iterations >= 1, "max_iterations must be at least 1");
  need(max_tests_per_problem >= 1, "max_tests_per_problem must be at least 1");
  need(adversarial_rounds >= 0, "adversarial_rounds must not be negative");
  need(adversarial_batch >= 1, "adversarial_batch must be at least 1");
  need(test_batch >= 1, "test_batch must be at least 1");
  need(!max_test_gen_rounds || *max_test_gen_rounds >= 1,
       "max_test_gen_rounds must be at least 1");
  need(prover_timeout.count() >= 1, "prover timeout must be positive");
  need(oracle_timeout.count() >= 1, "oracle timeout must be positive");
  completion.validate();
}

EngineConfig EngineConfig::dataset_defaults() {
  EngineConfig c;
  c.max_iterations = 10;
  c.dataset_mode = true;
  return c;
}

std::vector<AtomicRequirement> normalize_requirement_ids(
    std::vector<AtomicRequirement> requirements) {
  bool keep = !requirements.empty();
  std::string prefix;
  for (std::size_t i = 0; keep && i < requirements.size(); ++i) {
    const auto& id = requirements[i].id;
    std::string number = std::to_string(i + 1);
    if (id.size() <= number.size() ||
        id.compare(id.size() - number.size(), number.size(), number) != 0) {
      keep = false;
      break;
    }
    std::string head = id.substr(0, id.size() - number.size());
    if (head.empty() || std::isdigit(static_cast<unsigned char>(head.back()))) keep = false;
    if (i == 0) prefix = head;
    if (head != prefix) keep = false;
  }
  if (!keep) {
    for (std::size_t i = 0; i < requirements.size(); ++i) {
      requirements[i].id = "R" + std::to_string(i + 1);
    }
  }
  return requirements;
}

std::optional<std::vector<Value>> decode_input(const Json& json,
                                               const FunctionSignature& signature) {
  const auto& params = signature.input_params;
  auto fits = [&](const std::vector<Value>& args) {
    if (args.size() != params.size()) return false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!conforms_to(args[i], params[i].type_tag)) return false;
    }
    return true;
  };
  if (json.is_object()) {
    std::vector<Value> args;
    for (const auto& p : params) {
      if (!json.contains(p.name)) return std::nullopt;
      auto v = json_value(json[p.name]);
      if (!v) return std::nullopt;
      args.push_back(std::move(*v));
    }
    if (json.size() != params.size() || !fits(args)) return std::nullopt;
    return args;
  }
  if (json.is_array()) {
    std::vector<Value> args;
    bool ok = true;
    for (const auto& item : json) {
      auto v = json_value(item);
      if (!v) {
        ok = false;
        break;
      }
      args.push_back(std::move(*v));
    }
    if (ok && fits(args)) return args;
  }
  if (params.size() == 1) {
    auto v = json_value(json);
    if (v && conforms_to(*v, params[0].type_tag)) return std::vector<Value>{*v};
  }
  return std::nullopt;
}

std::vector<TestId> prune_by_coverage(const std::vector<TestCase>& tests,
                                      const TraceabilityMap& map,
                                      std::size_t capacity) {
  std::vector<TestId> order;
  for (const auto& t : tests) order.push_back(t.id);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return natural_id_less(a, b); });
  std::vector<TestId> kept;
  std::set<TestId> taken;
  RequirementIdSet covered;
  while (kept.size() < capacity) {
    const TestId* best = nullptr;
    std::size_t gain = 0;
    for (const auto& id : order) {
      if (taken.count(id)) continue;
      std::size_t g = 0;
      for (const auto& r : map.implicated(id)) g += covered.count(r) ? 0 : 1;
      if (g > gain) {
        gain = g;
        best = &id;
      }
    }
    if (!best) break;
    for (const auto& r : map.implicated(*best)) covered.insert(r);
    taken.insert(*best);
    kept.push_back(*best);
  }
  for (const auto& id : order) {
    if (kept.size() >= capacity) break;
    if (taken.insert(id).second) kept.push_back(id);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return natural_id_less(a, b); });
  return kept;
}

ProblemSession::ProblemSession(Problem problem, EngineConfig config,
                               EngineServices services)
    : problem_(std::move(problem)),
      config_(std::move(config)),
      services_(std::move(services)) {
  config_.validate();
  if (!services_.gateway || !services_.prover) {
    throw Error(ErrorKind::kConfigError, "engine needs a gateway and a prover");
  }
  check_oracle(problem_.oracle);
}

std::string ProblemSession::ask(TaskKind task, const llm::PromptContext& context) {
  check_cancel();
  return services_.gateway->ask(task, problem_.id, context);
}

void ProblemSession::check_cancel() const {
  if (services_.cancel && services_.cancel->load()) {
    throw Error(ErrorKind::kInterrupted, problem_.id);
  }
}

void ProblemSession::record(store::StepKind kind, Json payload) {
  if (!services_.sink) return;
  store::TrajectoryRecord r;
  r.problem_id = problem_.id;
  r.step_index = next_step_++;
  r.step_kind = kind;
  r.payload = std::move(payload);
  services_.sink->append_step(r);
}

std::string ProblemSession::next_test_id() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%03d", next_test_++);
  return buf;
}

void ProblemSession::merge_map(const TraceabilityMap& more) {
  for (const auto& [test, links] : more.entries()) map_.set(test, links);
}

std::vector<AtomicRequirement> ProblemSession::decompose() {
  auto extract = [&] {
    return decode_requirements(ask(TaskKind::kArDecomposition,
                                   decomposition_context(problem_)));
  };
  std::vector<AtomicRequirement> raw;
  try {
    raw = extract();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kTokenLimit || e.kind() == ErrorKind::kInterrupted ||
        e.kind() == ErrorKind::kScriptExhausted || e.kind() == ErrorKind::kTransportError) {
      throw;
    }
    try {
      raw = extract();
    } catch (const Error& again) {
      if (again.kind() == ErrorKind::kDecodeError ||
          again.kind() == ErrorKind::kNoBlockFound) {
        throw Error(ErrorKind::kParseFailure, "ar_decomposition: " + again.detail());
      }
      throw;
    }
  }
  if (raw.empty()) throw Error(ErrorKind::kEmptyDecomposition, problem_.id);
  raw_ = normalize_requirement_ids(std::move(raw));
  requirements_ = raw_;
  std::string reply = ask(TaskKind::kJudgeReview, review_context(problem_, raw_));
  try {
    auto reviewed = decode_requirements(reply);
    if (!reviewed.empty()) {
      requirements_ = normalize_requirement_ids(std::move(reviewed));
    } else {
      notes_.push_back("review returned no requirements; kept extraction");
    }
  } catch (const Error& e) {
    notes_.push_back("review reply unusable (" + e.detail() + "); kept extraction");
  }
  return requirements_;
}

GeneratedTests ProblemSession::generate_tests(const AtomicRequirement& requirement,
                                              TestKind kind, std::size_t budget) {
  GeneratedTests out;
  if (budget == 0) {
    out.budget_exhausted = true;
    return out;
  }
  const auto& sig = problem_.signature;
  std::vector<AtomicRequirement> target{requirement};
  auto keep = [&](TestCase t) {
    if (duplicated(t, suite_) || duplicated(t, out.tests)) {
      out.notes.push_back("duplicate candidate dropped");
      return;
    }
    if (out.tests.size() >= budget) {
      out.budget_exhausted = true;
      return;
    }
    out.tests.push_back(std::move(t));
  };
  std::size_t batch = static_cast<std::size_t>(config_.test_batch);

  if (kind == TestKind::kNegOutput) {
    std::vector<TestCase> labeled;
    for (const auto& t : suite_) {
      if (t.kind == TestKind::kPositive && t.source_requirement == requirement.id) {
        labeled.push_back(t);
      }
    }
    if (labeled.empty()) {
      for (const auto& t : suite_) {
        if (t.kind == TestKind::kPositive) labeled.push_back(t);
      }
    }
    if (labeled.empty()) {
      out.notes.push_back("no labeled positives to perturb for " + requirement.id);
      return out;
    }
    std::string reply = ask(TaskKind::kOutputPerturbation,
                            perturbation_context(problem_, target, labeled));
    std::vector<Json> items;
    try {
      items = reply_items(reply_json(reply));
    } catch (const Error& e) {
      out.notes.push_back("output_perturbation reply unusable: " + e.detail());
      return out;
    }
    std::size_t equal = 0, considered = 0;
    for (const auto& item : items) {
      if (considered >= batch) break;
      if (!item.is_object() || !item.contains("input")) continue;
      auto input = decode_input(item["input"], sig);
      const Json* wrong = first_of(item, {"wrong_output", "output"});
      auto wrong_value = wrong ? json_value(*wrong) : std::nullopt;
      if (!input || !wrong_value || !conforms_to(*wrong_value, sig.output_type)) continue;
      auto base = std::find_if(labeled.begin(), labeled.end(),
                               [&](const TestCase& t) { return t.input == *input; });
      if (base == labeled.end()) continue;
      ++considered;
      if (*wrong_value == *base->output) {
        ++equal;
        continue;
      }
      TestCase t;
      t.kind = TestKind::kNegOutput;
      t.input = *input;
      t.output = *wrong_value;
      t.correct_output = base->output;
      t.description = text_of(item, "description");
      t.source_requirement = requirement.id;
      keep(std::move(t));
    }
    if (considered > 0 && equal == considered) {
      out.all_perturbations_equal = true;
      out.notes.push_back("all perturbations equal the label for " + requirement.id);
    }
    return out;
  }

  TaskKind task = kind == TestKind::kPositive ? TaskKind::kPositiveTestGen
                                              : TaskKind::kNegativeInputTestGen;
  std::string reply = ask(task, test_gen_context(problem_, target));
  std::vector<Json> items;
  try {
    items = reply_items(reply_json(reply));
  } catch (const Error& e) {
    out.notes.push_back(std::string(llm::to_string(task)) + " reply unusable: " + e.detail());
    return out;
  }
  std::size_t considered = 0;
  for (const auto& item : items) {
    if (considered >= batch) break;
    if (!item.is_object() || !item.contains("input")) continue;
    auto input = decode_input(item["input"], sig);
    if (!input) {
      out.notes.push_back("candidate input does not fit the signature");
      continue;
    }
    ++considered;
    TestCase t;
    t.kind = kind;
    t.input = *input;
    t.description = text_of(item, "description");
    t.source_requirement = requirement.id;
    if (kind == TestKind::kPositive) {
      t.output = label_output(problem_.oracle, t.input, config_.oracle_timeout);
    }
    keep(std::move(t));
  }
  return out;
}

std::vector<TestCase> ProblemSession::admit(std::vector<TestCase> tests) {
  for (auto& t : tests) {
    t.id = next_test_id();
    suite_.push_back(t);
  }
  return tests;
}

std::optional<std::vector<RequirementLink>> ProblemSession::map_one(const TestCase& test) {
  std::set<RequirementId> known;
  for (const auto& r : requirements_) known.insert(r.id);
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string reply = ask(TaskKind::kTestMapping, mapping_context(requirements_, test));
    std::vector<RequirementLink> links;
    try {
      for (auto& link : decode_links(reply)) {
        if (known.count(link.requirement_id)) {
          links.push_back(std::move(link));
        } else {
          notes_.push_back(test.id + ": mapping to unknown " + link.requirement_id + " dropped");
        }
      }
    } catch (const Error& e) {
      notes_.push_back(test.id + ": mapping reply unusable: " + e.detail());
    }
    if (std::any_of(links.begin(), links.end(),
                    [](const RequirementLink& l) { return l.validates; })) {
      return links;
    }
  }
  return std::nullopt;
}

TraceabilityMap ProblemSession::build_traceability(const std::vector<TestCase>& tests) {
  TraceabilityMap out;
  for (const auto& t : tests) {
    auto links = map_one(t);
    if (!links) {
      if (!t.source_requirement) {
        throw Error(ErrorKind::kMappingFailure, t.id + " has no validating requirement");
      }
      notes_.push_back(t.id + ": mapped to its generating requirement " +
                       *t.source_requirement);
      links = std::vector<RequirementLink>{RequirementLink{
          *t.source_requirement, true, Confidence::kLow,
          "generated for this requirement"}};
    }
    out.set(t.id, std::move(*links));
  }
  return out;
}

Specification ProblemSession::initial_spec() {
  auto ctx = specgen_context(problem_, requirements_, config_.dialect);
  try {
    return spec_from_reply(ask(TaskKind::kDirectSpecgen, ctx), config_.dialect);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kParseFailure) throw;
    notes_.push_back("initial spec unparseable, re-prompting: " + e.detail());
  }
  return spec_from_reply(ask(TaskKind::kDirectSpecgen, ctx), config_.dialect);
}

TestResult ProblemSession::evaluate_one(const Specification& spec, const TestCase& test) {
  TestResult r;
  r.test_id = test.id;
  prover::Verdict verdict;
  try {
    auto prop = prover::instantiate_proposition(spec, test, problem_.signature);
    verdict = prover::decide(prop, *services_.prover);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kArityMismatch && e.kind() != ErrorKind::kParseError &&
        e.kind() != ErrorKind::kLiteralRenderError && e.kind() != ErrorKind::kTypeError) {
      throw;
    }
    verdict = prover::Verdict{VerdictTag::kProvedFalse, e.what()};
  }
  r.prover_verdict = verdict.tag;
  r.diagnostics = verdict.diagnostics;
  switch (prover::status_of(verdict)) {
    case prover::ProverStatus::kPass:
      r.status = TestStatus::kLeanPass;
      return r;
    case prover::ProverStatus::kFail:
      r.status = TestStatus::kLeanFail;
      return r;
    case prover::ProverStatus::kUnknown:
      break;
  }
  TestKind kind = test.effective_kind();
  std::string reply = ask(TaskKind::kVerdictUnknown, judge_context(spec, test));
  r.component = judge_component(kind);
  r.llm_reasoning = judge_reasoning(reply);
  auto answer = judge_answer(reply);
  if (!answer) {
    r.status = TestStatus::kJudgeFail;
    if (!r.diagnostics.empty()) r.diagnostics += "\n";
    r.diagnostics += "judge verdict unparseable";
    return r;
  }
  r.judge_answer = *answer ? "TRUE" : "FALSE";
  bool pass = kind == TestKind::kPositive ? *answer : !*answer;
  r.status = pass ? TestStatus::kJudgePass : TestStatus::kJudgeFail;
  return r;
}

EvalReport ProblemSession::evaluate_spec(const Specification& spec,
                                         const std::vector<TestCase>& tests) {
  EvalReport report;
  for (const auto& t : tests) {
    check_cancel();
    report.results.push_back(evaluate_one(spec, t));
  }
  validate_report(report, tests);
  return report;
}

RepairResult ProblemSession::repair(const Specification& spec,
                                    const RequirementIdSet& implicated,
                                    const EvalReport& report, int iteration) {
  if (implicated.empty()) {
    throw Error(ErrorKind::kInvalidModel, "repair needs implicated requirements");
  }
  TestIdSet failing = failing_tests(report);
  std::vector<TestId> ordered(failing.begin(), failing.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return natural_id_less(a, b); });

  FeedbackDelta delta;
  delta.iteration = iteration;
  delta.implicated_requirements = implicated;
  std::size_t total = report.results.size();
  delta.quality_score =
      total ? static_cast<double>(report.passing().size()) / static_cast<double>(total) : 0.0;

  std::string req_lines, test_lines;
  std::set<TestId> chosen;
  for (const auto& req : requirements_) {
    if (!implicated.count(req.id)) continue;
    req_lines += "- " + req.id + " (" + std::string(to_string(req.kind)) + "): " +
                 req.description + "\n";
    int picked = 0;
    for (const auto& id : ordered) {
      if (picked >= 3) break;
      if (!map_.implicated(id).count(req.id)) continue;
      ++picked;
      if (!chosen.insert(id).second) continue;
      auto it = std::find_if(suite_.begin(), suite_.end(),
                             [&](const TestCase& t) { return t.id == id; });
      const TestResult* res = report.find(id);
      std::string note = req.id + ": " +
                         (it != suite_.end() ? std::string(to_string(it->effective_kind())) +
                                                   " input " + inputs_text(it->input) +
                                                   " output " + output_text(it->output)
                                             : std::string("test")) +
                         (res ? " -> " + std::string(to_string(res->status)) : "");
      delta.representative_tests.push_back(RepresentativeTest{id, note});
      test_lines += "- " + id + " (" + note + ")\n";
    }
  }

  std::string analysis = ask(TaskKind::kFeedbackGeneration,
                             feedback_context(problem_, requirements_, spec,
                                              delta.quality_score));
  while (!analysis.empty() && std::isspace(static_cast<unsigned char>(analysis.back()))) {
    analysis.pop_back();
  }
  delta.analysis = analysis;
  delta.feedback_text = "## Failing requirements\n" + req_lines +
                        "\n## Representative failing tests\n" + test_lines +
                        "\n## Analysis\n" + analysis;

  RepairResult out;
  out.delta = delta;
  out.attempt = SpecAttempt{iteration, spec, delta.feedback_text, analysis,
                            delta.quality_score};
  auto ctx = refinement_context(problem_, requirements_, spec, delta.feedback_text);
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      out.next = spec_from_reply(ask(TaskKind::kSpecRefinement, ctx), config_.dialect);
      out.parsed = true;
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kParseFailure) throw;
      notes_.push_back("iteration " + std::to_string(iteration) +
                       ": corrected spec unparseable: " + e.detail());
    }
  }
  out.next = spec;
  out.parsed = false;
  return out;
}

AdversarialResult ProblemSession::adversarial_round(const Specification& spec) {
  AdversarialResult out;
  const auto& sig = problem_.signature;
  std::string reply = ask(TaskKind::kAdversarialTestGen,
                          adversarial_context(problem_, requirements_, spec));
  std::vector<Json> items;
  try {
    items = reply_items(reply_json(reply));
  } catch (const Error& e) {
    out.notes.push_back("adversarial reply unusable: " + e.detail());
    return out;
  }
  std::size_t capacity = static_cast<std::size_t>(config_.max_tests_per_problem);
  int seen = 0;
  for (const auto& item : items) {
    if (seen >= config_.adversarial_batch) break;
    if (!item.is_object() || !item.contains("input")) continue;
    auto input = decode_input(item["input"], sig);
    if (!input) {
      out.notes.push_back("adversarial input does not fit the signature");
      continue;
    }
    ++seen;
    ++out.candidates;
    const Json* expected = first_of(item, {"expected_output", "wrong_output", "output"});
    std::optional<Value> claimed = expected ? json_value(*expected) : std::nullopt;
    if (claimed && !conforms_to(*claimed, sig.output_type)) claimed.reset();

    TestCase t;
    t.kind = TestKind::kAdversarial;
    t.input = *input;
    t.description = text_of(item, "description");
    std::optional<TestKind> sub;
    std::string declared = lower(text_of(item, "test_type"));
    if (!declared.empty()) {
      try {
        sub = test_kind_from_string(declared);
      } catch (const Error&) {
      }
      if (sub == TestKind::kAdversarial) sub.reset();
    }
    std::optional<Value> label;
    if (sub != TestKind::kNegInput && (sub || claimed)) {
      try {
        label = label_output(problem_.oracle, t.input, config_.oracle_timeout);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kOracleCrash && e.kind() != ErrorKind::kOracleTimeout) throw;
        out.notes.push_back("oracle rejected adversarial input " + inputs_text(t.input));
        continue;
      }
    }
    if (!sub) {
      sub = !claimed ? TestKind::kNegInput
                     : (*claimed == *label ? TestKind::kPositive : TestKind::kNegOutput);
    }
    t.adversarial_subkind = sub;
    if (*sub == TestKind::kPositive) {
      t.output = label;
    } else if (*sub == TestKind::kNegOutput) {
      if (!claimed || *claimed == *label) {
        out.notes.push_back("adversarial wrong output equals the label; dropped");
        continue;
      }
      t.output = claimed;
      t.correct_output = label;
    }
    if (duplicated(t, suite_) || duplicated(t, out.added)) continue;
    t.id = "candidate";
    EvalReport single = evaluate_spec(spec, {t});
    if (failing_tests(single).empty()) continue;
    ++out.breaking;
    if (suite_.size() >= capacity) {
      out.notes.push_back("suite full; breaking candidate " + inputs_text(t.input) +
                          " dropped");
      continue;
    }
    t.id = next_test_id();
    std::optional<std::vector<RequirementLink>> links;
    links = map_one(t);
    if (!links) {
      --next_test_;
      out.notes.push_back(t.id + ": adversarial test could not be mapped; dropped");
      continue;
    }
    suite_.push_back(t);
    map_.set(t.id, *links);
    out.added_map.set(t.id, *links);
    out.added.push_back(std::move(t));
  }
  return out;
}

std::vector<TestCase> ProblemSession::generate_suite() {
  std::size_t capacity = static_cast<std::size_t>(config_.max_tests_per_problem);
  std::vector<TestCase> injected;
  if (config_.dataset_mode) {
    for (const auto& ex : problem_.labeled_tests) {
      TestCase t;
      t.kind = TestKind::kPositive;
      t.input = ex.input;
      t.output = ex.output;
      t.description = "labeled example";
      check_test_case(t, problem_.signature);
      if (!duplicated(t, injected)) injected.push_back(std::move(t));
    }
  }
  const TestKind kinds[] = {TestKind::kPositive, TestKind::kNegInput, TestKind::kNegOutput};
  bool full = false;
  for (int round = 0; !full; ++round) {
    if (config_.max_test_gen_rounds && round >= *config_.max_test_gen_rounds) break;
    std::size_t before = suite_.size();
    for (const auto& req : requirements_) {
      for (TestKind kind : kinds) {
        std::size_t left = capacity - suite_.size();
        if (left == 0) {
          full = true;
          break;
        }
        auto got = generate_tests(req, kind, left);
        for (auto& n : got.notes) notes_.push_back(std::move(n));
        admit(std::move(got.tests));
        if (got.budget_exhausted) full = true;
      }
      if (full) break;
    }
    if (suite_.size() == before) break;
  }

  if (!config_.dataset_mode || injected.empty()) {
    map_ = build_traceability(suite_);
    return suite_;
  }

  // Dataset mode: pool labeled examples with generated tests, map
  // everything, keep the best-covering subset, then renumber.
  std::vector<TestCase> pool;
  int n = 1;
  char buf[32];
  for (auto& t : injected) {
    std::snprintf(buf, sizeof buf, "p%03d", n++);
    t.id = buf;
    pool.push_back(t);
  }
  for (const auto& t : suite_) {
    if (!duplicated(t, pool)) pool.push_back(t);
  }
  TraceabilityMap pool_map;
  std::vector<TestCase> mapped;
  for (const auto& t : pool) {
    auto links = map_one(t);
    if (!links && t.source_requirement) {
      links = std::vector<RequirementLink>{RequirementLink{
          *t.source_requirement, true, Confidence::kLow, "generated for this requirement"}};
    }
    if (!links) {
      notes_.push_back(t.id + ": labeled example maps to no requirement; dropped");
      continue;
    }
    pool_map.set(t.id, *links);
    mapped.push_back(t);
  }
  auto kept = prune_by_coverage(mapped, pool_map, capacity);
  std::vector<TestCase> ordered;
  for (const auto& id : kept) {
    auto it = std::find_if(mapped.begin(), mapped.end(),
                           [&](const TestCase& t) { return t.id == id; });
    ordered.push_back(*it);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const TestCase& a, const TestCase& b) {
    bool ia = a.id[0] == 'p', ib = b.id[0] == 'p';
    return ia && !ib;
  });
  suite_.clear();
  map_ = TraceabilityMap();
  next_test_ = 1;
  for (auto& t : ordered) {
    auto links = *pool_map.find(t.id);
    t.id = next_test_id();
    map_.set(t.id, std::move(links));
    suite_.push_back(std::move(t));
  }
  return suite_;
}

Trajectory ProblemSession::run() {
  Trajectory tr;
  tr.problem = problem_;
  std::optional<Specification> current;
  try {
    decompose();
    tr.raw_requirements = raw_;
    tr.requirements = requirements_;
    record(store::StepKind::kDecomposition,
           store::decomposition_payload(problem_, raw_, requirements_));

    generate_suite();
    if (suite_.empty()) throw Error(ErrorKind::kInvalidModel, "no tests were generated");
    check_traceability(map_, suite_, requirements_);
    record(store::StepKind::kTestGen, store::tests_payload(suite_));
    record(store::StepKind::kMapping, store::mapping_payload(map_));

    current = initial_spec();
    record(store::StepKind::kSpec, store::spec_payload(0, *current));

    bool converged = false;
    for (int it = 0; it < config_.max_iterations && !converged; ++it) {
      check_cancel();
      EvalReport report = evaluate_spec(*current, suite_);
      record(store::StepKind::kEval, store::eval_payload(it, *current, report));
      tr.steps.push_back(TrajectoryStep{*current, report, std::nullopt});

      TestIdSet failing = failing_tests(report);
      if (failing.empty()) {
        bool broke = false;
        for (int round = 0; round < config_.adversarial_rounds; ++round) {
          auto adv = adversarial_round(*current);
          for (const auto& n : adv.notes) notes_.push_back(n);
          record(store::StepKind::kAdversarial,
                 store::adversarial_payload(round, it, adv.added, adv.added_map, adv.notes));
          if (!adv.added.empty()) {
            broke = true;
            break;
          }
        }
        if (!broke) converged = true;
        continue;
      }

      RequirementIdSet implicated = lift_failing_requirements(failing, map_);
      auto fix = repair(*current, implicated, report, it);
      tr.steps.back().delta = fix.delta;
      record(store::StepKind::kFeedback, store::feedback_payload(fix.delta));
      record(store::StepKind::kRepair, store::repair_payload(fix.attempt, fix.next, fix.parsed));
      current = fix.next;
    }

    if (converged) {
      // The last report must still cover the whole (unchanged) suite.
      const EvalReport& last = tr.steps.back().report;
      validate_report(last, suite_);
      if (!failing_tests(last).empty()) {
        throw Error(ErrorKind::kInvalidModel, "converged spec fails the final suite");
      }
      tr.outcome = Outcome::kConverged;
      tr.verified = true;
    } else {
      tr.outcome = Outcome::kBudgetExhausted;
      tr.verified = false;
    }
    tr.final_spec = current;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInterrupted) throw;
    tr.outcome = Outcome::kError;
    tr.error_message = e.what();
    tr.final_spec = current;
    tr.verified = false;
  } catch (const std::exception& e) {
    tr.outcome = Outcome::kError;
    tr.error_message = e.what();
    tr.final_spec = current;
    tr.verified = false;
  }
  std::stable_sort(suite_.begin(), suite_.end(), [](const TestCase& a, const TestCase& b) {
    return natural_id_less(a.id, b.id);
  });
  tr.suite = suite_;
  tr.map = map_;
  if (tr.raw_requirements.empty()) tr.raw_requirements = raw_;
  if (tr.requirements.empty()) tr.requirements = requirements_;
  record(store::StepKind::kFinal,
         store::final_payload(tr.outcome, tr.final_spec, tr.verified, tr.error_message));
  return tr;
}

Trajectory synthesize(const Problem& problem, const EngineConfig& config,
                      const EngineServices& services) {
  ProblemSession session(problem, config, services);
  return session.run();
}

}  // namespace tracespec::engine
