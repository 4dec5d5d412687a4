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

// The refinement loop for one problem: decompose, generate and map tests,
// synthesize, evaluate, attribute, repair, and probe with adversarial
// tests until nothing breaks or the iteration budget runs out.

#ifndef TRACESPEC_ENGINE_ENGINE_HPP_
#define TRACESPEC_ENGINE_ENGINE_HPP_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tracespec/core/checkpoint.hpp"
#include "tracespec/core/model.hpp"
#include "tracespec/llm/gateway.hpp"
#include "tracespec/prover/prover.hpp"
#include "tracespec/store/store.hpp"

namespace tracespec::engine {

struct EngineConfig {
  int max_iterations = 25;
  int max_tests_per_problem = 60;
  int adversarial_rounds = 2;
  int adversarial_batch = 8;
  /// Tests kept from one generation call.
  int test_batch = 3;
  /// Caps the round-robin generation passes; unset runs until the suite is
  /// full or a whole pass adds nothing.
  std::optional<int> max_test_gen_rounds;
  std::chrono::milliseconds prover_timeout = std::chrono::seconds(120);
  std::chrono::milliseconds oracle_timeout = std::chrono::seconds(10);
  /// Inject the bundle's labeled tests and prune by requirement coverage.
  bool dataset_mode = false;
  Dialect dialect = Dialect::kMini;
  llm::CompletionParams completion;

  /// Throws Error(kConfigError).
  void validate() const;

  /// Dataset-construction defaults: 10 iterations, dataset_mode on.
  static EngineConfig dataset_defaults();
};

struct EngineServices {
  std::shared_ptr<llm::Gateway> gateway;
  std::shared_ptr<prover::ProverBackend> prover;
  /// Optional; steps are dropped when null.
  std::shared_ptr<store::StepSink> sink;
  /// Polled between stages; set to stop with Error(kInterrupted).
  const std::atomic<bool>* cancel = nullptr;
};

struct GeneratedTests {
  std::vector<TestCase> tests;
  /// Candidates were cut because the suite is full.
  bool budget_exhausted = false;
  /// Every proposed wrong output equalled the oracle label.
  bool all_perturbations_equal = false;
  std::vector<std::string> notes;
};

struct RepairResult {
  Specification next;
  FeedbackDelta delta;
  SpecAttempt attempt;
  /// False when the corrected spec never parsed and `next` is the input.
  bool parsed = true;
};

struct AdversarialResult {
  std::vector<TestCase> added;
  TraceabilityMap added_map;
  int candidates = 0;
  int breaking = 0;
  std::vector<std::string> notes;
};

/// State and operations of one synthesis run. Not thread-safe; run one
/// session per problem.
class ProblemSession {
 public:
  ProblemSession(Problem problem, EngineConfig config, EngineServices services);

  /// Extraction then one review pass. Sets raw_requirements() and
  /// requirements(). Throws ParseFailure or EmptyDecomposition.
  std::vector<AtomicRequirement> decompose();

  /// Tests of `kind` targeting `requirement`, at most `budget` of them.
  /// Positive outputs come from the oracle; neg_output tests perturb labeled
  /// positives already in the suite. Ids are left empty.
  GeneratedTests generate_tests(const AtomicRequirement& requirement,
                                TestKind kind, std::size_t budget);

  /// Adds tests to the suite, assigning fresh ids. Returns the stored copies.
  std::vector<TestCase> admit(std::vector<TestCase> tests);

  /// One test_mapping call per test (plus one retry); falls back to the
  /// generating requirement. Throws MappingFailure without provenance.
  TraceabilityMap build_traceability(const std::vector<TestCase>& tests);

  /// One direct_specgen call, re-prompted once on ParseFailure.
  Specification initial_spec();

  EvalReport evaluate_spec(const Specification& spec,
                           const std::vector<TestCase>& tests);

  RepairResult repair(const Specification& spec,
                      const RequirementIdSet& implicated,
                      const EvalReport& report, int iteration);

  /// One adversarial_test_gen call; breaking candidates join the suite and
  /// the map.
  AdversarialResult adversarial_round(const Specification& spec);

  /// Full loop with step recording. Never throws except Interrupted.
  Trajectory run();

  const Problem& problem() const { return problem_; }
  const EngineConfig& config() const { return config_; }
  const std::vector<AtomicRequirement>& raw_requirements() const { return raw_; }
  const std::vector<AtomicRequirement>& requirements() const { return requirements_; }
  void set_requirements(std::vector<AtomicRequirement> requirements) {
    requirements_ = std::move(requirements);
  }
  const std::vector<TestCase>& suite() const { return suite_; }
  const TraceabilityMap& map() const { return map_; }
  void merge_map(const TraceabilityMap& more);
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::string ask(llm::TaskKind task, const llm::PromptContext& context);
  void check_cancel() const;
  void record(store::StepKind kind, Json payload);
  std::vector<TestCase> generate_suite();
  std::optional<std::vector<RequirementLink>> map_one(const TestCase& test);
  TestResult evaluate_one(const Specification& spec, const TestCase& test);
  std::string next_test_id();

  Problem problem_;
  EngineConfig config_;
  EngineServices services_;
  std::vector<AtomicRequirement> raw_;
  std::vector<AtomicRequirement> requirements_;
  std::vector<TestCase> suite_;
  TraceabilityMap map_;
  std::vector<std::string> notes_;
  int next_test_ = 1;
  int next_step_ = 0;
};

/// Runs one problem end to end.
Trajectory synthesize(const Problem& problem, const EngineConfig& config,
                      const EngineServices& services);

/// Keeps ids that are unique and numbered 1..m under one prefix; otherwise
/// renumbers R1..Rm in order.
std::vector<AtomicRequirement> normalize_requirement_ids(
    std::vector<AtomicRequirement> requirements);

/// Decodes a candidate input: an argument array, a bare value (unary
/// functions), or an object keyed by parameter name. nullopt when it does
/// not fit the signature.
std::optional<std::vector<Value>> decode_input(const Json& json,
                                               const FunctionSignature& signature);

/// Greedy set cover of requirements by tests, ties by natural id, then
/// filled in id order up to `capacity`. Returns the kept ids.
std::vector<TestId> prune_by_coverage(const std::vector<TestCase>& tests,
                                      const TraceabilityMap& map,
                                      std::size_t capacity);

}  // namespace tracespec::engine

#endif  // TRACESPEC_ENGINE_ENGINE_HPP_
