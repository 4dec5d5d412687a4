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

// Append-only JSON Lines store of trajectory steps. Every line is one
// record:
//
//   {"schema_version":1,"problem_id":...,"step_index":...,
//    "step_kind":...,"timestamp":...,"payload":{...}}
//
// Payload keys follow the checkpoint vocabulary.

#ifndef TRACESPEC_STORE_STORE_HPP_
#define TRACESPEC_STORE_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tracespec/core/checkpoint.hpp"
#include "tracespec/core/codec.hpp"
#include "tracespec/core/model.hpp"

namespace tracespec::store {

inline constexpr int kSchemaVersion = 1;

enum class StepKind {
  kDecomposition,
  kTestGen,
  kMapping,
  kSpec,
  kEval,
  kFeedback,
  kRepair,
  kAdversarial,
  kFinal,
};

std::string_view to_string(StepKind kind);
StepKind step_kind_from_string(std::string_view text);

struct TrajectoryRecord {
  int schema_version = kSchemaVersion;
  std::string problem_id;
  int step_index = 0;
  StepKind step_kind = StepKind::kDecomposition;
  std::int64_t timestamp = 0;
  Json payload = Json::object();

  friend bool operator==(const TrajectoryRecord&,
                         const TrajectoryRecord&) = default;
};

Json to_json(const TrajectoryRecord& record);
TrajectoryRecord record_from_json(const Json& json);

/// Payload builders shared by the engine (writer) and the loaders.
Json decomposition_payload(const Problem& problem,
                           const std::vector<AtomicRequirement>& raw,
                           const std::vector<AtomicRequirement>& reviewed);
/// {testcases, negative_input_testcases, negative_output_testcases,
/// adversarial_testcases}, grouped by kind.
Json tests_payload(const std::vector<TestCase>& tests);
Json mapping_payload(const TraceabilityMap& map);
Json spec_payload(int iteration, const Specification& spec);
Json eval_payload(int iteration, const Specification& spec,
                  const EvalReport& report);
Json feedback_payload(const FeedbackDelta& delta);
Json repair_payload(const SpecAttempt& attempt, const Specification& next,
                    bool parsed);
Json adversarial_payload(int round, int iteration,
                         const std::vector<TestCase>& added,
                         const TraceabilityMap& added_map,
                         const std::vector<std::string>& notes);
Json final_payload(Outcome outcome, const std::optional<Specification>& spec,
                   bool verified, const std::string& error_message);

/// Receives trajectory steps as the engine produces them.
class StepSink {
 public:
  virtual ~StepSink() = default;
  virtual void append_step(const TrajectoryRecord& record) = 0;
};

/// Keeps records in memory with the same ordering rules as the file store.
class MemorySink final : public StepSink {
 public:
  void append_step(const TrajectoryRecord& record) override;
  std::vector<TrajectoryRecord> records() const;

 private:
  mutable std::mutex mu_;
  std::vector<TrajectoryRecord> records_;
  std::map<std::string, int> next_;
};

class TrajectoryStore final : public StepSink {
 public:
  /// Milliseconds stamped on records whose timestamp is 0.
  using Clock = std::function<std::int64_t()>;
  static Clock zero_clock();
  static Clock wall_clock();

  /// Opens (creating if needed) for appending. Existing complete records
  /// seed the duplicate/order checks.
  explicit TrajectoryStore(std::filesystem::path path,
                           Clock clock = zero_clock());
  ~TrajectoryStore() override;
  TrajectoryStore(const TrajectoryStore&) = delete;
  TrajectoryStore& operator=(const TrajectoryStore&) = delete;

  /// Durable (fsync) before return. Throws DuplicateStep, OutOfOrderStep,
  /// or StoreClosed once the problem's final record exists.
  void append_step(const TrajectoryRecord& record) override;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  Clock clock_;
  int fd_ = -1;
  std::mutex mu_;
  std::map<std::string, int> next_;
  std::set<std::string> closed_;
};

struct ReadResult {
  std::vector<TrajectoryRecord> records;
  std::size_t corrupt = 0;
};

/// strict: the first bad line raises CorruptRecord(line). Otherwise bad
/// lines are skipped and counted.
ReadResult read_records(const std::filesystem::path& path, bool strict);

/// Rebuilds one problem's trajectory from its records (in step order).
/// require_final: missing final record raises Incomplete; otherwise the
/// result has outcome kIncomplete.
Trajectory trajectory_from_records(const std::vector<TrajectoryRecord>& records,
                                   const std::string& problem_id,
                                   bool require_final);

/// Strict load.
Trajectory load_trajectory(const std::filesystem::path& path,
                           const std::string& problem_id);

/// Loads whatever complete records exist; never throws Incomplete.
Trajectory recover_trajectory(const std::filesystem::path& path,
                              const std::string& problem_id);

/// Problem ids in order of first appearance.
std::vector<std::string> problem_ids(const std::vector<TrajectoryRecord>& records);

struct CheckpointStream {
  std::vector<Checkpoint> checkpoints;
  std::size_t corrupt_records = 0;
};

/// One cumulative checkpoint per eval record, ordered by (problem_id,
/// step_index). Corrupt lines are skipped and counted.
CheckpointStream iterate_checkpoints(const std::filesystem::path& path);
CheckpointStream checkpoints_from_records(std::vector<TrajectoryRecord> records);

}  // namespace tracespec::store

#endif  // TRACESPEC_STORE_STORE_HPP_
