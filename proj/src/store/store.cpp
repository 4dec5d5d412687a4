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

#include "tracespec/store/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tracespec/core/error.hpp"

namespace tracespec::store {

namespace {

constexpr std::array<std::pair<StepKind, std::string_view>, 9> kStepKinds{{
    {StepKind::kDecomposition, "decomposition"},
    {StepKind::kTestGen, "test_gen"},
    {StepKind::kMapping, "mapping"},
    {StepKind::kSpec, "spec"},
    {StepKind::kEval, "eval"},
    {StepKind::kFeedback, "feedback"},
    {StepKind::kRepair, "repair"},
    {StepKind::kAdversarial, "adversarial"},
    {StepKind::kFinal, "final"},
}};

constexpr std::array<std::pair<const char*, TestKind>, 4> kTestArrays{{
    {"testcases", TestKind::kPositive},
    {"negative_input_testcases", TestKind::kNegInput},
    {"negative_output_testcases", TestKind::kNegOutput},
    {"adversarial_testcases", TestKind::kAdversarial},
}};

/// Shared ordering checks for sinks.
void check_order(std::map<std::string, int>& next,
                 const std::set<std::string>& closed,
                 const TrajectoryRecord& record) {
  if (closed.count(record.problem_id)) {
    throw Error(ErrorKind::kStoreClosed, record.problem_id);
  }
  int expected = next.count(record.problem_id) ? next[record.problem_id] : 0;
  if (record.step_index < expected) {
    throw Error(ErrorKind::kDuplicateStep,
                record.problem_id + " step " + std::to_string(record.step_index));
  }
  if (record.step_index > expected) {
    throw Error(ErrorKind::kOutOfOrderStep,
                record.problem_id + " step " + std::to_string(record.step_index) +
                    ", expected " + std::to_string(expected));
  }
}

std::vector<TestCase> tests_from_payload(const Json& payload) {
  std::vector<TestCase> out;
  for (const auto& [key, kind] : kTestArrays) {
    if (!payload.contains(key)) continue;
    for (const auto& t : payload.at(key)) {
      out.push_back(checkpoint_test_from_json(t, kind));
    }
  }
  return out;
}

void merge_map(TraceabilityMap& into, const Json& payload) {
  if (!payload.contains("testcase_ar_mapping_detailed")) return;
  auto add = traceability_from_json(payload.at("testcase_ar_mapping_detailed"));
  for (const auto& [test, links] : add.entries()) into.set(test, links);
}

std::vector<TrajectoryRecord> records_for(
    const std::vector<TrajectoryRecord>& records, const std::string& problem_id) {
  std::vector<TrajectoryRecord> out;
  for (const auto& r : records) {
    if (r.problem_id == problem_id) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.step_index < b.step_index;
  });
  return out;
}

std::string result_status(TestStatus status) {
  switch (status) {
    case TestStatus::kLeanPass: return "pass";
    case TestStatus::kLeanFail: return "fail";
    case TestStatus::kJudgePass:
    case TestStatus::kJudgeFail: break;
  }
  return "unknown";
}

}  // namespace

std::string_view to_string(StepKind kind) {
  for (const auto& [k, name] : kStepKinds) {
    if (k == kind) return name;
  }
  return "?";
}

StepKind step_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kStepKinds) {
    if (name == text) return k;
  }
  throw Error(ErrorKind::kInvalidModel, "unknown step kind '" + std::string(text) + "'");
}

Json to_json(const TrajectoryRecord& record) {
  return Json{{"schema_version", record.schema_version},
              {"problem_id", record.problem_id},
              {"step_index", record.step_index},
              {"step_kind", to_string(record.step_kind)},
              {"timestamp", record.timestamp},
              {"payload", record.payload}};
}

TrajectoryRecord record_from_json(const Json& json) {
  TrajectoryRecord r;
  r.schema_version = json.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    throw Error(ErrorKind::kInvalidModel,
                "unsupported schema_version " + std::to_string(r.schema_version));
  }
  r.problem_id = json.at("problem_id").get<std::string>();
  r.step_index = json.at("step_index").get<int>();
  r.step_kind = step_kind_from_string(json.at("step_kind").get<std::string>());
  r.timestamp = json.at("timestamp").get<std::int64_t>();
  r.payload = json.at("payload");
  if (!r.payload.is_object()) {
    throw Error(ErrorKind::kInvalidModel, "payload must be an object");
  }
  return r;
}

Json decomposition_payload(const Problem& problem,
                           const std::vector<AtomicRequirement>& raw,
                           const std::vector<AtomicRequirement>& reviewed) {
  return Json{{"problem", to_json(problem)},
              {"problem_description", problem.description},
              {"signature", to_json(problem.signature)},
              {"raw_requirements", to_json(raw)},
              {"informal_requirements", to_json(reviewed)}};
}

Json tests_payload(const std::vector<TestCase>& tests) {
  Json out = Json::object();
  for (const auto& [key, kind] : kTestArrays) {
    Json array = Json::array();
    for (const auto& t : tests) {
      if (t.kind == kind) array.push_back(checkpoint_test_json(t));
    }
    out[key] = std::move(array);
  }
  return out;
}

Json mapping_payload(const TraceabilityMap& map) {
  return Json{{"testcase_ar_mapping_detailed", to_json(map)}};
}

Json spec_payload(int iteration, const Specification& spec) {
  return Json{{"iteration", iteration}, {"spec", to_json(spec)}};
}

Json eval_payload(int iteration, const Specification& spec,
                  const EvalReport& report) {
  return Json{{"iteration", iteration},
              {"spec", to_json(spec)},
              {"report", to_json(report)}};
}

Json feedback_payload(const FeedbackDelta& delta) {
  return Json{{"iteration", delta.iteration}, {"delta", to_json(delta)}};
}

Json repair_payload(const SpecAttempt& attempt, const Specification& next,
                    bool parsed) {
  return Json{{"iteration", attempt.iteration},
              {"spec_attempt", to_json(attempt)},
              {"spec", to_json(next)},
              {"parsed", parsed}};
}

Json adversarial_payload(int round, int iteration,
                         const std::vector<TestCase>& added,
                         const TraceabilityMap& added_map,
                         const std::vector<std::string>& notes) {
  Json out{{"round", round}, {"iteration", iteration}};
  Json tests = Json::array();
  for (const auto& t : added) tests.push_back(checkpoint_test_json(t));
  out["adversarial_testcases"] = std::move(tests);
  out["testcase_ar_mapping_detailed"] = to_json(added_map);
  out["notes"] = notes;
  return out;
}

Json final_payload(Outcome outcome, const std::optional<Specification>& spec,
                   bool verified, const std::string& error_message) {
  Json out{{"outcome", to_string(outcome)}};
  if (spec) out["final_spec"] = to_json(*spec);
  out["verified"] = verified;
  out["error_message"] = error_message;
  return out;
}

void MemorySink::append_step(const TrajectoryRecord& record) {
  std::lock_guard lock(mu_);
  std::set<std::string> closed;
  for (const auto& r : records_) {
    if (r.step_kind == StepKind::kFinal) closed.insert(r.problem_id);
  }
  check_order(next_, closed, record);
  records_.push_back(record);
  next_[record.problem_id] = record.step_index + 1;
}

std::vector<TrajectoryRecord> MemorySink::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

TrajectoryStore::Clock TrajectoryStore::zero_clock() {
  return [] { return std::int64_t{0}; };
}

TrajectoryStore::Clock TrajectoryStore::wall_clock() {
  return [] {
    return static_cast<std::int64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
  };
}

TrajectoryStore::TrajectoryStore(std::filesystem::path path, Clock clock)
    : path_(std::move(path)), clock_(std::move(clock)) {
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  if (std::filesystem::exists(path_)) {
    for (const auto& r : read_records(path_, false).records) {
      next_[r.problem_id] = std::max(next_[r.problem_id], r.step_index + 1);
      if (r.step_kind == StepKind::kFinal) closed_.insert(r.problem_id);
    }
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorKind::kIoError,
                "cannot open " + path_.string() + ": " + std::strerror(errno));
  }
  // Seal a torn tail so the next record starts on its own line.
  struct stat st {};
  if (::fstat(fd_, &st) == 0 && st.st_size > 0) {
    std::ifstream in(path_, std::ios::binary);
    in.seekg(-1, std::ios::end);
    char last = '\n';
    in.get(last);
    if (last != '\n') {
      ssize_t w = ::write(fd_, "\n", 1);
      (void)w;
    }
  }
}

TrajectoryStore::~TrajectoryStore() {
  if (fd_ >= 0) ::close(fd_);
}

void TrajectoryStore::append_step(const TrajectoryRecord& record) {
  std::lock_guard lock(mu_);
  check_order(next_, closed_, record);
  TrajectoryRecord stamped = record;
  if (stamped.timestamp == 0) stamped.timestamp = clock_();
  std::string line = to_json(stamped).dump() + "\n";
  std::size_t done = 0;
  while (done < line.size()) {
    ssize_t w = ::write(fd_, line.data() + done, line.size() - done);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kIoError,
                  "write " + path_.string() + ": " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(w);
  }
  if (::fsync(fd_) != 0) {
    throw Error(ErrorKind::kIoError,
                "fsync " + path_.string() + ": " + std::strerror(errno));
  }
  next_[record.problem_id] = record.step_index + 1;
  if (record.step_kind == StepKind::kFinal) closed_.insert(record.problem_id);
}

ReadResult read_records(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();

  ReadResult out;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos < text.size()) {
    ++lineno;
    std::size_t eol = text.find('\n', pos);
    bool complete = eol != std::string::npos;
    std::string line = text.substr(pos, complete ? eol - pos : std::string::npos);
    pos = complete ? eol + 1 : text.size();
    if (line.empty()) continue;
    try {
      if (!complete) throw Error(ErrorKind::kCorruptRecord, "unterminated line");
      out.records.push_back(record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      if (strict) {
        throw Error(ErrorKind::kCorruptRecord,
                    "line " + std::to_string(lineno) + ": " + e.what());
      }
      ++out.corrupt;
    }
  }
  return out;
}

Trajectory trajectory_from_records(const std::vector<TrajectoryRecord>& records,
                                   const std::string& problem_id,
                                   bool require_final) {
  Trajectory t;
  bool have_final = false;
  for (const auto& r : records_for(records, problem_id)) {
    const Json& p = r.payload;
    switch (r.step_kind) {
      case StepKind::kDecomposition:
        t.problem = problem_from_json(p.at("problem"));
        t.raw_requirements = requirements_from_json(p.at("raw_requirements"));
        t.requirements = requirements_from_json(p.at("informal_requirements"));
        break;
      case StepKind::kTestGen:
        for (auto& test : tests_from_payload(p)) t.suite.push_back(std::move(test));
        break;
      case StepKind::kMapping:
        merge_map(t.map, p);
        break;
      case StepKind::kSpec:
      case StepKind::kRepair:
        break;
      case StepKind::kEval:
        t.steps.push_back(TrajectoryStep{spec_from_json(p.at("spec")),
                                         report_from_json(p.at("report")),
                                         std::nullopt});
        break;
      case StepKind::kFeedback:
        if (t.steps.empty()) {
          throw Error(ErrorKind::kCorruptRecord, "feedback before any eval");
        }
        t.steps.back().delta = delta_from_json(p.at("delta"));
        break;
      case StepKind::kAdversarial:
        for (auto& test : tests_from_payload(p)) t.suite.push_back(std::move(test));
        merge_map(t.map, p);
        break;
      case StepKind::kFinal:
        have_final = true;
        t.outcome = outcome_from_string(p.at("outcome").get<std::string>());
        if (p.contains("final_spec")) t.final_spec = spec_from_json(p.at("final_spec"));
        t.verified = p.at("verified").get<bool>();
        t.error_message = p.value("error_message", "");
        break;
    }
  }
  std::stable_sort(t.suite.begin(), t.suite.end(), [](const auto& a, const auto& b) {
    return natural_id_less(a.id, b.id);
  });
  if (!have_final) {
    if (require_final) throw Error(ErrorKind::kIncomplete, problem_id);
    t.outcome = Outcome::kIncomplete;
  }
  return t;
}

Trajectory load_trajectory(const std::filesystem::path& path,
                           const std::string& problem_id) {
  return trajectory_from_records(read_records(path, true).records, problem_id, true);
}

Trajectory recover_trajectory(const std::filesystem::path& path,
                              const std::string& problem_id) {
  return trajectory_from_records(read_records(path, false).records, problem_id,
                                 false);
}

std::vector<std::string> problem_ids(const std::vector<TrajectoryRecord>& records) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.problem_id).second) out.push_back(r.problem_id);
  }
  return out;
}

CheckpointStream checkpoints_from_records(std::vector<TrajectoryRecord> records) {
  CheckpointStream out;
  std::vector<std::string> ids = problem_ids(records);
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    Checkpoint cp;
    cp.problem_id = id;
    std::vector<Checkpoint> emitted;
    std::optional<Outcome> outcome;
    for (const auto& r : records_for(records, id)) {
      const Json& p = r.payload;
      try {
        switch (r.step_kind) {
          case StepKind::kDecomposition: {
            Problem problem = problem_from_json(p.at("problem"));
            cp.problem_description = problem.description;
            cp.signature = problem.signature;
            cp.informal_requirements =
                requirements_from_json(p.at("informal_requirements"));
            break;
          }
          case StepKind::kTestGen:
          case StepKind::kAdversarial:
            for (auto& t : tests_from_payload(p)) {
              switch (t.kind) {
                case TestKind::kPositive: cp.testcases.push_back(std::move(t)); break;
                case TestKind::kNegInput:
                  cp.negative_input_testcases.push_back(std::move(t));
                  break;
                case TestKind::kNegOutput:
                  cp.negative_output_testcases.push_back(std::move(t));
                  break;
                case TestKind::kAdversarial:
                  cp.adversarial_testcases.push_back(std::move(t));
                  break;
              }
            }
            if (p.contains("testcase_ar_mapping_detailed")) {
              if (!cp.testcase_ar_mapping_detailed) cp.testcase_ar_mapping_detailed.emplace();
              merge_map(*cp.testcase_ar_mapping_detailed, p);
            }
            break;
          case StepKind::kMapping:
            if (!cp.testcase_ar_mapping_detailed) cp.testcase_ar_mapping_detailed.emplace();
            merge_map(*cp.testcase_ar_mapping_detailed, p);
            break;
          case StepKind::kSpec:
            cp.spec = spec_from_json(p.at("spec"));
            break;
          case StepKind::kEval: {
            Specification spec = spec_from_json(p.at("spec"));
            EvalReport report = report_from_json(p.at("report"));
            int iteration = p.at("iteration").get<int>();
            cp.spec = spec;
            for (const auto& res : report.results) {
              SpecEvalResult e;
              e.iteration = iteration;
              e.test_id = res.test_id;
              const TestCase* test = cp.find_test(res.test_id);
              e.test_type = test ? std::string(to_string(test->effective_kind())) : "";
              e.result_status = result_status(res.status);
              e.status = res.status;
              e.component = res.component;
              e.eval_result = res.judge_answer;
              e.llm_reasoning = res.llm_reasoning;
              e.spec = spec;
              cp.spec_eval.push_back(std::move(e));
            }
            cp.step_index = r.step_index;
            emitted.push_back(cp);
            break;
          }
          case StepKind::kFeedback:
            break;
          case StepKind::kRepair:
            cp.spec_attempts.push_back(attempt_from_json(p.at("spec_attempt")));
            break;
          case StepKind::kFinal:
            outcome = outcome_from_string(p.at("outcome").get<std::string>());
            break;
        }
      } catch (const std::exception&) {
        ++out.corrupt_records;
      }
    }
    for (auto& c : emitted) {
      c.outcome = outcome;
      out.checkpoints.push_back(std::move(c));
    }
  }
  return out;
}

CheckpointStream iterate_checkpoints(const std::filesystem::path& path) {
  ReadResult read = read_records(path, false);
  CheckpointStream out = checkpoints_from_records(std::move(read.records));
  out.corrupt_records += read.corrupt;
  return out;
}

}  // namespace tracespec::store
