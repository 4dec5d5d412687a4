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

#include "tracespec/distill/distill.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "tracespec/core/error.hpp"
#include "tracespec/engine/contexts.hpp"

namespace tracespec::distill {

namespace {

using llm::TaskKind;

Error field_error(const std::string& field, const std::string& why) {
  return Error(ErrorKind::kCheckpointFieldError, field + ": " + why);
}

Json tests_json(const std::vector<TestCase>& tests, TestKind kind) {
  Json out = Json::array();
  for (const auto& t : tests) {
    Json j{{"input", inputs_to_json(t.input)}};
    switch (kind) {
      case TestKind::kPositive:
        j["output"] = t.output ? to_json(*t.output) : Json();
        break;
      case TestKind::kNegInput:
        break;
      case TestKind::kNegOutput:
        j["wrong_output"] = t.output ? to_json(*t.output) : Json();
        if (t.correct_output) j["correct_output"] = to_json(*t.correct_output);
        break;
      case TestKind::kAdversarial:
        if (t.output) j["expected_output"] = to_json(*t.output);
        break;
    }
    j["description"] = t.description;
    out.push_back(std::move(j));
  }
  return out;
}

std::string block(const Json& json) { return json.dump(2); }

class Builder {
 public:
  explicit Builder(const Checkpoint& cp) : cp_(cp) {}

  std::vector<SftExample> run() {
    if (cp_.problem_description) {
      problem_.id = cp_.problem_id;
      problem_.description = *cp_.problem_description;
    }
    if (cp_.signature) problem_.signature = *cp_.signature;
    if (cp_.informal_requirements) reqs_ = *cp_.informal_requirements;
    bool have_problem = cp_.problem_description && cp_.signature;
    bool have_reqs = have_problem && !reqs_.empty();

    if (have_reqs) ar_decomposition();
    if (have_reqs && cp_.spec) direct_specgen();
    if (have_reqs) attempts();
    if (cp_.problem_description && cp_.signature) signature_generation();
    if (have_reqs) test_generation();
    if (cp_.testcase_ar_mapping_detailed && !reqs_.empty()) test_mapping();
    verdicts();
    return std::move(out_);
  }

 private:
  void emit(TaskKind task, const llm::PromptContext& user_ctx, std::string response,
            Json extra = Json::object()) {
    SftExample ex;
    ex.task = task;
    ex.messages = llm::render(task, user_ctx);
    ex.messages.push_back(llm::ChatMessage{llm::Role::kAssistant, std::move(response)});
    ex.problem_id = cp_.problem_id;
    ex.step_index = cp_.step_index;
    ex.extra = std::move(extra);
    out_.push_back(std::move(ex));
  }

  void ar_decomposition() {
    std::size_t pre = 0, post = 0;
    for (const auto& r : reqs_) {
      (r.kind == RequirementKind::kPrecondition ? pre : post)++;
    }
    emit(TaskKind::kArDecomposition, engine::decomposition_context(problem_),
         llm::render_response(TaskKind::kArDecomposition,
                              {{"ir_count", std::to_string(reqs_.size())},
                               {"precond_count", std::to_string(pre)},
                               {"postcond_count", std::to_string(post)},
                               {"requirements_json", engine::requirements_text(reqs_)}}));
  }

  void direct_specgen() {
    const Specification& s = *cp_.spec;
    emit(TaskKind::kDirectSpecgen, engine::specgen_context(problem_, reqs_, s.dialect),
         engine::spec_text(s));
  }

  void attempts() {
    for (const auto& a : cp_.spec_attempts) {
      if (cp_.spec) {
        emit(TaskKind::kSpecRefinement,
             engine::refinement_context(problem_, reqs_, a.spec, a.feedback),
             llm::render_response(TaskKind::kSpecRefinement,
                                  {{"corrected_spec", engine::spec_text(*cp_.spec)}}));
      }
      std::string fb = a.informalized_feedback.empty() ? a.feedback : a.informalized_feedback;
      if (fb.empty()) continue;
      emit(TaskKind::kFeedbackGeneration,
           engine::feedback_context(problem_, reqs_, a.spec, a.quality_score), fb);
    }
  }

  void signature_generation() {
    const auto& sig = problem_.signature;
    emit(TaskKind::kSignatureGeneration,
         {{"problem_description", problem_.description}},
         llm::render_response(TaskKind::kSignatureGeneration,
                              {{"func_name", sig.function_name},
                               {"num_params", std::to_string(sig.input_params.size())},
                               {"output_type", sig.output_type},
                               {"signature_json", engine::signature_text(sig)}}));
  }

  void test_task(TaskKind task, const std::vector<TestCase>& tests, TestKind kind,
                 llm::PromptContext ctx, Json extra = Json::object()) {
    if (tests.empty()) return;
    emit(task, ctx,
         llm::render_response(task, {{"test_count", std::to_string(tests.size())},
                                     {"testcases_json", block(tests_json(tests, kind))}}),
         std::move(extra));
  }

  void test_generation() {
    auto base = engine::test_gen_context(problem_, reqs_);
    test_task(TaskKind::kPositiveTestGen, cp_.testcases, TestKind::kPositive, base);
    test_task(TaskKind::kNegativeInputTestGen, cp_.negative_input_testcases,
              TestKind::kNegInput, base);
    if (!cp_.negative_output_testcases.empty()) {
      auto ctx = base;
      ctx["positive_tests_json"] = block(tests_json(cp_.testcases, TestKind::kPositive));
      test_task(TaskKind::kNegativeOutputTestGen, cp_.negative_output_testcases,
                TestKind::kNegOutput, ctx);
    }
    if (!cp_.adversarial_testcases.empty() && cp_.spec) {
      bool failure = false;
      for (const auto& e : cp_.spec_eval) {
        if (e.result_status == "fail" || e.status == TestStatus::kJudgeFail) {
          for (const auto& t : cp_.adversarial_testcases) failure |= t.id == e.test_id;
        }
      }
      test_task(TaskKind::kAdversarialTestGen, cp_.adversarial_testcases,
                TestKind::kAdversarial, engine::adversarial_context(problem_, reqs_, *cp_.spec),
                Json{{"adversarial_failure", failure}});
    }
  }

  void test_mapping() {
    const auto& map = *cp_.testcase_ar_mapping_detailed;
    std::string_view tmpl = llm::prompt_template(TaskKind::kTestMapping).response;
    auto start = tmpl.find("**{req_id}**");
    auto end = tmpl.find("\n\n", start);
    if (start == std::string_view::npos || end == std::string_view::npos) {
      throw Error(ErrorKind::kInvalidModel, "test_mapping response template");
    }
    std::string head(tmpl.substr(0, start));
    std::string_view each = tmpl.substr(start, end - start);
    std::string_view tail = tmpl.substr(end);

    std::vector<TestId> ids;
    for (const auto& [id, links] : map.entries()) ids.push_back(id);
    std::sort(ids.begin(), ids.end(),
              [](const auto& a, const auto& b) { return natural_id_less(a, b); });
    for (const auto& id : ids) {
      const TestCase* test = cp_.find_test(id);
      if (!test) throw field_error("testcase_ar_mapping_detailed", "unknown test " + id);
      const auto& links = *map.find(id);
      if (links.empty()) continue;
      std::string blocks;
      Json detailed = Json::object();
      for (const auto& l : links) {
        if (!blocks.empty()) blocks += "\n\n";
        blocks += llm::substitute(each, {{"req_id", l.requirement_id},
                                         {"status", l.validates ? "validates" : "does not validate"},
                                         {"confidence", std::string(to_string(l.confidence))},
                                         {"reason", l.reason}});
        detailed[l.requirement_id] = Json{{"validates", l.validates},
                                          {"confidence", to_string(l.confidence)},
                                          {"reason", l.reason}};
      }
      std::string response =
          head + blocks + llm::substitute(tail, {{"detailed_mapping", block(detailed)}});
      emit(TaskKind::kTestMapping, engine::mapping_context(reqs_, *test), response,
           Json{{"test_id", id}});
    }
  }

  void verdicts() {
    for (const auto& e : cp_.spec_eval) {
      if (e.result_status != "unknown") continue;
      if (e.eval_result != "TRUE" && e.eval_result != "FALSE") continue;
      const TestCase* test = cp_.find_test(e.test_id);
      if (!test) throw field_error("spec_eval", "unknown test " + e.test_id);
      std::string component =
          e.component.empty() ? engine::judge_component(test->effective_kind()) : e.component;
      emit(TaskKind::kVerdictUnknown, engine::judge_context(e.spec, *test),
           llm::render_response(TaskKind::kVerdictUnknown,
                                {{"component", component},
                                 {"reasoning", e.llm_reasoning},
                                 {"eval_result", e.eval_result}}),
           Json{{"test_id", e.test_id}, {"iteration", e.iteration}});
    }
  }

  const Checkpoint& cp_;
  Problem problem_;
  std::vector<AtomicRequirement> reqs_;
  std::vector<SftExample> out_;
};

}  // namespace

Json to_json(const SftExample& example) {
  Json messages = Json::array();
  for (const auto& m : example.messages) {
    messages.push_back(Json{{"role", llm::to_string(m.role)}, {"content", m.content}});
  }
  Json meta{{"problem_id", example.problem_id}, {"step_index", example.step_index}};
  for (const auto& [k, v] : example.extra.items()) meta[k] = v;
  return Json{{"task", llm::to_string(example.task)},
              {"messages", std::move(messages)},
              {"meta", std::move(meta)}};
}

SftExample example_from_json(const Json& json) {
  SftExample ex;
  try {
    ex.task = llm::task_kind_from_string(json.at("task").get<std::string>());
    for (const auto& m : json.at("messages")) {
      std::string role = m.at("role").get<std::string>();
      llm::Role r = role == "system" ? llm::Role::kSystem
                    : role == "user" ? llm::Role::kUser
                                     : llm::Role::kAssistant;
      ex.messages.push_back(llm::ChatMessage{r, m.at("content").get<std::string>()});
    }
    const Json& meta = json.at("meta");
    ex.problem_id = meta.at("problem_id").get<std::string>();
    ex.step_index = meta.at("step_index").get<int>();
    for (const auto& [k, v] : meta.items()) {
      if (k != "problem_id" && k != "step_index") ex.extra[k] = v;
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidModel, std::string("example: ") + e.what());
  }
  return ex;
}

std::vector<SftExample> distill_checkpoint(const Checkpoint& checkpoint) {
  return Builder(checkpoint).run();
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kFull: return "full";
    case Variant::kNoTest: return "no_test";
    case Variant::kSpecOnly: return "spec_only";
  }
  return "?";
}

Variant variant_from_string(std::string_view text) {
  if (text == "full") return Variant::kFull;
  if (text == "no_test" || text == "no-test") return Variant::kNoTest;
  if (text == "spec_only" || text == "spec-only") return Variant::kSpecOnly;
  throw Error(ErrorKind::kConfigError, "unknown variant " + std::string(text));
}

const std::vector<TaskKind>& variant_tasks(Variant variant) {
  static const std::vector<TaskKind> full = llm::dataset_tasks();
  static const std::vector<TaskKind> no_test = {
      TaskKind::kArDecomposition, TaskKind::kDirectSpecgen, TaskKind::kSpecRefinement,
      TaskKind::kFeedbackGeneration, TaskKind::kSignatureGeneration};
  static const std::vector<TaskKind> spec_only = {TaskKind::kDirectSpecgen};
  switch (variant) {
    case Variant::kFull: return full;
    case Variant::kNoTest: return no_test;
    case Variant::kSpecOnly: return spec_only;
  }
  return full;
}

bool variant_includes(Variant variant, TaskKind task) {
  const auto& tasks = variant_tasks(variant);
  return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
}

std::vector<SftExample> apply_variant(const std::vector<SftExample>& examples,
                                      Variant variant) {
  std::vector<SftExample> out;
  for (const auto& ex : examples) {
    if (variant_includes(variant, ex.task)) out.push_back(ex);
  }
  return out;
}

bool converged(const Checkpoint& checkpoint) {
  return checkpoint.outcome == Outcome::kConverged;
}

std::vector<Checkpoint> select_checkpoints(const std::vector<Checkpoint>& checkpoints,
                                           const CheckpointPredicate& keep) {
  std::vector<std::string> order;
  std::map<std::string, const Checkpoint*> last;
  for (const auto& cp : checkpoints) {
    auto [it, fresh] = last.emplace(cp.problem_id, &cp);
    if (fresh) {
      order.push_back(cp.problem_id);
    } else if (cp.step_index >= it->second->step_index) {
      it->second = &cp;
    }
  }
  std::vector<Checkpoint> out;
  for (const auto& id : order) {
    if (keep(*last[id])) out.push_back(*last[id]);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

std::string window(const std::vector<std::string>& tokens, std::size_t at, std::size_t n) {
  std::string key;
  for (std::size_t i = at; i < at + n; ++i) {
    key += tokens[i];
    key.push_back(' ');
  }
  return key;
}

}  // namespace

DecontaminationResult decontaminate(const std::vector<Problem>& problems,
                                    const std::vector<std::string>& benchmark_texts,
                                    std::size_t n) {
  if (n == 0) throw Error(ErrorKind::kConfigError, "n-gram size must be positive");
  std::unordered_set<std::string> grams;
  for (const auto& text : benchmark_texts) {
    auto tokens = tokenize(text);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) grams.insert(window(tokens, i, n));
  }
  DecontaminationResult out;
  for (const auto& p : problems) {
    auto tokens = tokenize(p.description);
    bool hit = false;
    for (std::size_t i = 0; !hit && i + n <= tokens.size(); ++i) {
      hit = grams.count(window(tokens, i, n)) > 0;
    }
    if (hit) {
      out.dropped.push_back(p.id);
    } else {
      out.kept.push_back(p);
    }
  }
  return out;
}

double rounded_percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0.0;
  unsigned long long p = part, w = whole;
  unsigned long long tenths = (2000ULL * p + w) / (2ULL * w);
  return static_cast<double>(tenths) / 10.0;
}

DatasetStats dataset_stats(const std::map<TaskKind, std::size_t>& counts) {
  DatasetStats s;
  for (TaskKind task : llm::dataset_tasks()) {
    auto it = counts.find(task);
    std::size_t c = it == counts.end() ? 0 : it->second;
    s.tasks.push_back(TaskStat{task, c, 0.0});
    s.total += c;
  }
  std::size_t core = 0;
  for (auto& t : s.tasks) {
    t.percent = rounded_percent(t.count, s.total);
    if (variant_includes(Variant::kNoTest, t.task)) core += t.count;
  }
  for (Variant v : {Variant::kFull, Variant::kNoTest, Variant::kSpecOnly}) {
    std::size_t sum = 0;
    for (const auto& t : s.tasks) {
      if (variant_includes(v, t.task)) sum += t.count;
    }
    s.variant_totals[v] = sum;
  }
  s.core_share = rounded_percent(core, s.total);
  s.test_share = rounded_percent(s.total - core, s.total);
  return s;
}

DatasetStats dataset_stats(const std::vector<SftExample>& examples) {
  std::map<TaskKind, std::size_t> counts;
  for (const auto& ex : examples) ++counts[ex.task];
  return dataset_stats(counts);
}

Json to_json(const DatasetStats& stats) {
  Json tasks = Json::array();
  for (const auto& t : stats.tasks) {
    tasks.push_back(Json{{"task", llm::to_string(t.task)},
                         {"count", t.count},
                         {"percent", t.percent}});
  }
  Json variants = Json::object();
  for (const auto& [v, n] : stats.variant_totals) variants[std::string(to_string(v))] = n;
  return Json{{"total", stats.total},
              {"tasks", std::move(tasks)},
              {"core_share", stats.core_share},
              {"test_share", stats.test_share},
              {"variants", std::move(variants)}};
}

ShardWriter::ShardWriter(std::filesystem::path dir, std::string prefix,
                         std::size_t per_shard)
    : dir_(std::move(dir)), prefix_(std::move(prefix)), per_shard_(per_shard) {
  if (per_shard_ == 0) throw Error(ErrorKind::kConfigError, "shard size must be positive");
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::kIoError, dir_.string() + ": " + ec.message());
}

ShardWriter::~ShardWriter() {
  if (out_.is_open()) out_.close();
}

void ShardWriter::write(const SftExample& example) {
  if (written_ % per_shard_ == 0) {
    if (out_.is_open()) out_.close();
    char name[64];
    std::snprintf(name, sizeof name, "-%05zu.jsonl", written_ / per_shard_);
    files_.push_back(dir_ / (prefix_ + name));
    out_.open(files_.back(), std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorKind::kIoError, "cannot write " + files_.back().string());
  }
  out_ << to_json(example).dump() << '\n';
  if (!out_) throw Error(ErrorKind::kIoError, "write failed: " + files_.back().string());
  ++written_;
}

std::vector<std::filesystem::path> ShardWriter::close() {
  if (out_.is_open()) {
    out_.flush();
    out_.close();
  }
  return files_;
}

std::vector<SftExample> read_examples(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + file.string());
  std::vector<SftExample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(example_from_json(Json::parse(line)));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::kInvalidModel, file.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace tracespec::distill
