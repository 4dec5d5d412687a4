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

// Turns recorded checkpoints into instruction/response examples, one task
// at a time, and provides the dataset filters and statistics.

#ifndef TRACESPEC_DISTILL_DISTILL_HPP_
#define TRACESPEC_DISTILL_DISTILL_HPP_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tracespec/core/checkpoint.hpp"
#include "tracespec/core/codec.hpp"
#include "tracespec/llm/prompts.hpp"

namespace tracespec::distill {

struct SftExample {
  llm::TaskKind task = llm::TaskKind::kArDecomposition;
  /// system, user, assistant.
  std::vector<llm::ChatMessage> messages;
  std::string problem_id;
  int step_index = 0;
  /// Extra metadata, e.g. adversarial_failure.
  Json extra = Json::object();

  friend bool operator==(const SftExample&, const SftExample&) = default;
};

Json to_json(const SftExample& example);
SftExample example_from_json(const Json& json);

/// Examples for every task whose source fields are present. Throws
/// Error(kCheckpointFieldError) naming a malformed field.
std::vector<SftExample> distill_checkpoint(const Checkpoint& checkpoint);

enum class Variant { kFull, kNoTest, kSpecOnly };

std::string_view to_string(Variant variant);
/// Accepts "full", "no_test"/"no-test", "spec_only"/"spec-only".
Variant variant_from_string(std::string_view text);
const std::vector<llm::TaskKind>& variant_tasks(Variant variant);
bool variant_includes(Variant variant, llm::TaskKind task);

std::vector<SftExample> apply_variant(const std::vector<SftExample>& examples,
                                      Variant variant);

using CheckpointPredicate = std::function<bool(const Checkpoint&)>;

/// Default quality filter: the problem converged.
bool converged(const Checkpoint& checkpoint);

/// The last checkpoint of each problem, kept when `keep` accepts it.
std::vector<Checkpoint> select_checkpoints(const std::vector<Checkpoint>& checkpoints,
                                           const CheckpointPredicate& keep = converged);

/// Lowercased alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

struct DecontaminationResult {
  std::vector<Problem> kept;
  std::vector<std::string> dropped;
};

/// Drops problems whose description shares an n-token window with any
/// benchmark text. Input order is kept.
DecontaminationResult decontaminate(const std::vector<Problem>& problems,
                                    const std::vector<std::string>& benchmark_texts,
                                    std::size_t n = 10);

struct TaskStat {
  llm::TaskKind task;
  std::size_t count = 0;
  /// count / total, rounded half up to 0.1.
  double percent = 0.0;
};

struct DatasetStats {
  std::vector<TaskStat> tasks;
  std::size_t total = 0;
  std::map<Variant, std::size_t> variant_totals;
  /// Tasks outside the no-test set, as a rounded share.
  double test_share = 0.0;
  double core_share = 0.0;
};

/// Half-up rounding of 100 * part / whole to one decimal.
double rounded_percent(std::size_t part, std::size_t whole);

DatasetStats dataset_stats(const std::map<llm::TaskKind, std::size_t>& counts);
DatasetStats dataset_stats(const std::vector<SftExample>& examples);
Json to_json(const DatasetStats& stats);

/// JSON Lines output split into files of at most `per_shard` examples:
/// <prefix>-00000.jsonl, <prefix>-00001.jsonl, ...
class ShardWriter {
 public:
  ShardWriter(std::filesystem::path dir, std::string prefix,
              std::size_t per_shard = 50000);
  ~ShardWriter();
  ShardWriter(const ShardWriter&) = delete;
  ShardWriter& operator=(const ShardWriter&) = delete;

  void write(const SftExample& example);
  /// Flushes and returns the files written.
  std::vector<std::filesystem::path> close();
  std::size_t written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::string prefix_;
  std::size_t per_shard_;
  std::size_t written_ = 0;
  std::ofstream out_;
  std::vector<std::filesystem::path> files_;
};

/// Reads every shard line back.
std::vector<SftExample> read_examples(const std::filesystem::path& file);

}  // namespace tracespec::distill

#endif  // TRACESPEC_DISTILL_DISTILL_HPP_
