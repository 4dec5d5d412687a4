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

#include "tracespec/cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tracespec/core/attribution.hpp"
#include "tracespec/core/codec.hpp"
#include "tracespec/core/error.hpp"
#include "tracespec/distill/distill.hpp"
#include "tracespec/engine/engine.hpp"
#include "tracespec/engine/oracle.hpp"
#include "tracespec/llm/backend.hpp"
#include "tracespec/prover/prover.hpp"
#include "tracespec/store/store.hpp"

namespace tracespec::cli {

namespace fs = std::filesystem;

namespace {

struct SynthOptions {
  std::string bundle;
  std::string out;
  std::string backend = "scripted";
  std::string script;
  std::string endpoint;
  std::string model;
  std::string api_key_env;
  int attempts = 1;
  double temperature = 0.3;
  int max_tokens = 10000;
  std::string prover = "mini";
  std::vector<std::string> lean_command = {"lake", "env", "lean"};
  std::string tactic = "grind";
  int prover_timeout = 120;
  int oracle_timeout = 10;
  std::optional<int> max_iterations;
  int max_tests = 60;
  int adversarial_rounds = 2;
  int adversarial_batch = 8;
  std::optional<int> test_gen_rounds;
  int workers = 1;
  bool dataset_mode = false;
  bool force = false;
};

struct DistillOptions {
  std::string store;
  std::string out;
  std::string variant = "full";
  std::string benchmark;
  std::size_t ngram = 10;
  std::size_t shard_size = 50000;
  bool all_outcomes = false;
};

struct ReplayOptions {
  std::string store;
  std::string problem;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kConfigError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Problem> load_bundle(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorKind::kConfigError, "bundle not found: " + path.string());
  }
  std::string text = read_file(path);
  std::vector<Problem> out;
  try {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
      for (const auto& item : Json::parse(text)) out.push_back(problem_from_json(item));
    } else {
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(problem_from_json(Json::parse(line)));
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kConfigError, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfigError, path.string() + ": " + e.what());
  }
  if (out.empty()) throw Error(ErrorKind::kConfigError, "bundle is empty: " + path.string());
  std::set<std::string> ids;
  for (const auto& p : out) {
    if (!ids.insert(p.id).second) {
      throw Error(ErrorKind::kConfigError, "duplicate problem id " + p.id);
    }
  }
  return out;
}

void write_json(const fs::path& path, const Json& json) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out << json.dump(2) << "\n";
}

int synth(const SynthOptions& o, std::ostream& out, std::ostream& err,
          std::atomic<bool>* cancel) {
  auto problems = load_bundle(o.bundle);
  if (o.workers < 1) throw Error(ErrorKind::kConfigError, "--workers must be at least 1");

  engine::EngineConfig config =
      o.dataset_mode ? engine::EngineConfig::dataset_defaults() : engine::EngineConfig{};
  if (o.max_iterations) config.max_iterations = *o.max_iterations;
  config.max_tests_per_problem = o.max_tests;
  config.adversarial_rounds = o.adversarial_rounds;
  config.adversarial_batch = o.adversarial_batch;
  config.max_test_gen_rounds = o.test_gen_rounds;
  config.prover_timeout = std::chrono::seconds(o.prover_timeout);
  config.oracle_timeout = std::chrono::seconds(o.oracle_timeout);
  config.dataset_mode = o.dataset_mode;
  config.dialect = o.prover == "lean" ? Dialect::kLean : Dialect::kMini;
  config.completion.temperature = o.temperature;
  config.completion.max_tokens = o.max_tokens;
  config.completion.model_id = o.model;
  config.validate();
  for (const auto& p : problems) engine::check_oracle(p.oracle);

  std::shared_ptr<llm::CompletionBackend> backend;
  store::TrajectoryStore::Clock clock = store::TrajectoryStore::zero_clock();
  if (o.backend == "scripted") {
    if (o.script.empty() || !fs::is_regular_file(o.script)) {
      throw Error(ErrorKind::kConfigError, "--script file required for the scripted backend");
    }
    backend = std::make_shared<llm::ScriptedBackend>(llm::ScriptedBackend::load(o.script));
  } else {
    if (o.endpoint.empty()) throw Error(ErrorKind::kConfigError, "--endpoint is required");
    llm::RemoteConfig rc;
    rc.endpoint = o.endpoint;
    rc.auth_env = o.api_key_env;
    rc.attempts = o.attempts;
    backend = std::make_shared<llm::RemoteBackend>(rc);
    clock = store::TrajectoryStore::wall_clock();
  }

  std::shared_ptr<prover::ProverBackend> prover;
  if (o.prover == "lean") {
    prover::LeanConfig lc;
    lc.command = o.lean_command;
    lc.tactic = o.tactic;
    lc.timeout = config.prover_timeout;
    lc.pool_size = o.workers;
    if (lc.command.empty() || !prover::command_available(lc.command.front())) {
      throw Error(ErrorKind::kConfigError, "Lean command not found: " +
                                               (lc.command.empty() ? "" : lc.command.front()));
    }
    prover = std::make_shared<prover::LeanBackend>(lc);
  } else {
    prover = std::make_shared<prover::MiniBackend>();
  }

  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kConfigError, dir.string() + ": " + ec.message());
  fs::path store_path = dir / "trajectories.jsonl";
  if (fs::exists(store_path) && fs::file_size(store_path) > 0) {
    if (!o.force) {
      throw Error(ErrorKind::kConfigError,
                  store_path.string() + " exists; pass --force to replace it");
    }
    fs::remove(store_path);
  }
  auto sink = std::make_shared<store::TrajectoryStore>(store_path, clock);

  engine::EngineServices services;
  services.gateway = std::make_shared<llm::Gateway>(backend, config.completion);
  services.prover = prover;
  services.sink = sink;
  services.cancel = cancel;

  std::vector<Json> entries(problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    entries[i] = Json{{"id", problems[i].id}, {"outcome", "not_started"}};
  }
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> interrupted{false};
  auto work = [&] {
    for (;;) {
      if (cancel && cancel->load()) {
        interrupted = true;
        return;
      }
      std::size_t i = next++;
      if (i >= problems.size()) return;
      auto start = std::chrono::steady_clock::now();
      Json entry{{"id", problems[i].id}};
      try {
        Trajectory t = engine::synthesize(problems[i], config, services);
        entry["outcome"] = to_string(t.outcome);
        entry["iterations"] = t.steps.size();
        entry["suite_size"] = t.suite.size();
        entry["verified"] = t.verified;
        if (!t.error_message.empty()) entry["error"] = t.error_message;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kInterrupted) interrupted = true;
        entry["outcome"] = e.kind() == ErrorKind::kInterrupted ? "interrupted" : "error";
        entry["error"] = e.what();
      } catch (const std::exception& e) {
        entry["outcome"] = "error";
        entry["error"] = e.what();
      }
      entry["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
      std::lock_guard<std::mutex> lock(mu);
      entries[i] = std::move(entry);
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(o.workers, static_cast<int>(problems.size()));
  for (int w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  bool any_error = false;
  Json list = Json::array();
  for (auto& e : entries) {
    std::string outcome = e["outcome"].get<std::string>();
    any_error |= outcome == "error";
    out << e["id"].get<std::string>() << ": " << outcome;
    if (e.contains("iterations")) {
      out << " (iterations " << e["iterations"].get<std::size_t>() << ", tests "
          << e["suite_size"].get<std::size_t>() << ")";
    }
    out << "\n";
    if (e.contains("error")) err << e["id"].get<std::string>() << ": " << e["error"].get<std::string>() << "\n";
    list.push_back(e);
  }
  write_json(dir / "manifest.json",
             Json{{"store", store_path.filename().string()},
                  {"complete", !interrupted.load()},
                  {"problems", std::move(list)}});
  if (interrupted) return kExitInterrupted;
  return any_error ? kExitFailure : kExitOk;
}

std::vector<std::string> load_benchmark(const fs::path& path) {
  std::string text = read_file(path);
  if (path.extension() != ".jsonl") return {text};
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Json j = Json::parse(line);
      if (j.is_string()) {
        out.push_back(j.get<std::string>());
      } else {
        for (const char* key : {"description", "text", "problem"}) {
          if (j.contains(key) && j[key].is_string()) {
            out.push_back(j[key].get<std::string>());
            break;
          }
        }
      }
    } catch (const Json::exception&) {
      out.push_back(line);
    }
  }
  return out;
}

int distill_cmd(const DistillOptions& o, std::ostream& out, std::ostream& err) {
  if (!fs::is_regular_file(o.store)) {
    throw Error(ErrorKind::kConfigError, "store not found: " + o.store);
  }
  distill::Variant variant = distill::variant_from_string(o.variant);
  store::CheckpointStream stream;
  try {
    stream = store::iterate_checkpoints(o.store);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfigError, e.what());
  }
  auto keep = o.all_outcomes ? distill::CheckpointPredicate([](const Checkpoint&) { return true; })
                             : distill::CheckpointPredicate(distill::converged);
  auto checkpoints = distill::select_checkpoints(stream.checkpoints, keep);

  std::vector<std::string> dropped;
  if (!o.benchmark.empty()) {
    std::vector<Problem> problems;
    for (const auto& cp : checkpoints) {
      Problem p;
      p.id = cp.problem_id;
      p.description = cp.problem_description.value_or("");
      problems.push_back(std::move(p));
    }
    auto result = distill::decontaminate(problems, load_benchmark(o.benchmark), o.ngram);
    dropped = result.dropped;
    std::set<std::string> gone(dropped.begin(), dropped.end());
    checkpoints.erase(std::remove_if(checkpoints.begin(), checkpoints.end(),
                                     [&](const Checkpoint& c) { return gone.count(c.problem_id) > 0; }),
                      checkpoints.end());
  }

  distill::ShardWriter writer(o.out, std::string(distill::to_string(variant)), o.shard_size);
  std::vector<distill::SftExample> all;
  for (const auto& cp : checkpoints) {
    for (auto& ex : distill::apply_variant(distill::distill_checkpoint(cp), variant)) {
      writer.write(ex);
      all.push_back(std::move(ex));
    }
  }
  auto files = writer.close();
  Json report = distill::to_json(distill::dataset_stats(all));
  report["variant"] = distill::to_string(variant);
  report["checkpoints"] = checkpoints.size();
  report["corrupt_records"] = stream.corrupt_records;
  report["dropped_problems"] = dropped;
  Json names = Json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  report["files"] = std::move(names);
  write_json(fs::path(o.out) / "stats.json", report);
  out << report.dump(2) << "\n";
  if (stream.corrupt_records) err << "skipped " << stream.corrupt_records << " corrupt records\n";
  return kExitOk;
}

int stats_cmd(const std::vector<std::string>& inputs, std::ostream& out) {
  std::map<llm::TaskKind, std::size_t> counts;
  for (const auto& in : inputs) {
    fs::path path(in);
    if (!fs::is_regular_file(path)) throw Error(ErrorKind::kConfigError, "not found: " + in);
    if (path.extension() == ".json") {
      Json j;
      try {
        j = Json::parse(read_file(path));
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::kConfigError, in + ": " + e.what());
      }
      const Json& table = j.contains("counts") ? j["counts"] : j;
      for (const auto& [task, n] : table.items()) {
        counts[llm::task_kind_from_string(task)] += n.get<std::size_t>();
      }
    } else {
      for (const auto& ex : distill::read_examples(path)) ++counts[ex.task];
    }
  }
  out << distill::to_json(distill::dataset_stats(counts)).dump(2) << "\n";
  return kExitOk;
}

int replay_cmd(const ReplayOptions& o, std::ostream& out, std::ostream& err) {
  if (!fs::is_regular_file(o.store)) {
    throw Error(ErrorKind::kConfigError, "store not found: " + o.store);
  }
  auto records = store::read_records(o.store, true).records;
  std::vector<std::string> ids = store::problem_ids(records);
  if (!o.problem.empty()) {
    if (std::find(ids.begin(), ids.end(), o.problem) == ids.end()) {
      throw Error(ErrorKind::kConfigError, "problem not in store: " + o.problem);
    }
    ids = {o.problem};
  }
  prover::MiniBackend mini;
  std::size_t mismatches = 0, checked = 0;
  for (const auto& id : ids) {
    Trajectory t = store::trajectory_from_records(records, id, false);
    std::map<TestId, const TestCase*> tests;
    for (const auto& tc : t.suite) tests[tc.id] = &tc;
    for (std::size_t step = 0; step < t.steps.size(); ++step) {
      const auto& s = t.steps[step];
      if (s.spec.dialect != Dialect::kMini) {
        out << id << ": step " << step << " skipped (lean dialect)\n";
        continue;
      }
      for (const auto& r : s.report.results) {
        if (r.prover_verdict == VerdictTag::kUnknown) continue;
        auto it = tests.find(r.test_id);
        if (it == tests.end()) {
          ++mismatches;
          err << id << " step " << step << " " << r.test_id << ": test missing from suite\n";
          continue;
        }
        VerdictTag replayed;
        try {
          replayed = mini.decide(
              prover::instantiate_proposition(s.spec, *it->second, t.problem.signature)).tag;
        } catch (const Error&) {
          replayed = VerdictTag::kProvedFalse;
        }
        TestStatus expect = replayed == VerdictTag::kProvedTrue ? TestStatus::kLeanPass
                                                                 : TestStatus::kLeanFail;
        ++checked;
        if (expect != r.status || replayed != r.prover_verdict) {
          ++mismatches;
          err << id << " step " << step << " " << r.test_id << ": recorded "
              << to_string(r.status) << ", replayed " << to_string(expect) << "\n";
        }
      }
    }
  }
  out << "replayed " << checked << " verdicts, " << mismatches << " mismatches\n";
  return mismatches ? kExitFailure : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        std::atomic<bool>* cancel) {
  CLI::App app{"Traceable specification synthesis and dataset tools", "tracespec"};
  app.require_subcommand(1);

  SynthOptions so;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize specifications for a problem bundle");
  synth_cmd->add_option("--bundle", so.bundle, "Problem bundle (JSON Lines)")->required();
  synth_cmd->add_option("--out", so.out, "Output directory")->required();
  synth_cmd->add_option("--backend", so.backend, "Completion backend")
      ->check(CLI::IsMember({"scripted", "remote"}));
  synth_cmd->add_option("--script", so.script, "Scripted replies (JSON Lines)");
  synth_cmd->add_option("--endpoint", so.endpoint, "Chat-completions URL (remote)");
  synth_cmd->add_option("--model", so.model, "Model id (remote)");
  synth_cmd->add_option("--api-key-env", so.api_key_env, "Environment variable with the API key");
  synth_cmd->add_option("--attempts", so.attempts, "Remote call attempts");
  synth_cmd->add_option("--temperature", so.temperature, "Sampling temperature");
  synth_cmd->add_option("--max-tokens", so.max_tokens, "Completion token limit");
  synth_cmd->add_option("--prover", so.prover, "Prover backend")
      ->check(CLI::IsMember({"mini", "lean"}));
  synth_cmd->add_option("--lean-command", so.lean_command, "Lean invocation (file path appended)");
  synth_cmd->add_option("--tactic", so.tactic, "Proof automation tactic");
  synth_cmd->add_option("--prover-timeout", so.prover_timeout, "Seconds per proof attempt");
  synth_cmd->add_option("--oracle-timeout", so.oracle_timeout, "Seconds per oracle call");
  synth_cmd->add_option("--max-iterations", so.max_iterations, "Refinement budget");
  synth_cmd->add_option("--max-tests", so.max_tests, "Suite size cap");
  synth_cmd->add_option("--adversarial-rounds", so.adversarial_rounds, "Non-breaking rounds to converge");
  synth_cmd->add_option("--adversarial-batch", so.adversarial_batch, "Candidates per round");
  synth_cmd->add_option("--test-gen-rounds", so.test_gen_rounds, "Round-robin generation passes");
  synth_cmd->add_option("--workers", so.workers, "Problems run concurrently");
  synth_cmd->add_flag("--dataset-mode", so.dataset_mode, "Inject labeled tests, prune by coverage");
  synth_cmd->add_flag("--force", so.force, "Replace an existing store");

  DistillOptions dopt;
  auto* distill_sub = app.add_subcommand("distill", "Build the instruction dataset from a store");
  distill_sub->add_option("--store", dopt.store, "Trajectory store")->required();
  distill_sub->add_option("--out", dopt.out, "Output directory")->required();
  distill_sub->add_option("--variant", dopt.variant, "Dataset variant")
      ->check(CLI::IsMember({"full", "no-test", "spec-only", "no_test", "spec_only"}));
  distill_sub->add_option("--benchmark", dopt.benchmark, "Benchmark texts for decontamination");
  distill_sub->add_option("--ngram", dopt.ngram, "Decontamination window");
  distill_sub->add_option("--shard-size", dopt.shard_size, "Examples per output file");
  distill_sub->add_flag("--all-outcomes", dopt.all_outcomes, "Keep unconverged problems too");

  std::vector<std::string> stats_inputs;
  auto* stats_sub = app.add_subcommand("stats", "Per-task counts and variant totals");
  stats_sub->add_option("inputs", stats_inputs, "Dataset shards or a counts table (.json)")
      ->required();

  ReplayOptions ropt;
  auto* replay_sub = app.add_subcommand("replay", "Re-check recorded verdicts (mini dialect)");
  replay_sub->add_option("--store", ropt.store, "Trajectory store")->required();
  replay_sub->add_option("--problem", ropt.problem, "Only this problem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*synth_cmd) return synth(so, out, err, cancel);
    if (*distill_sub) return distill_cmd(dopt, out, err);
    if (*stats_sub) return stats_cmd(stats_inputs, out);
    if (*replay_sub) return replay_cmd(ropt, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.kind() == ErrorKind::kConfigError || e.kind() == ErrorKind::kUnknownTask) {
      return kExitConfig;
    }
    if (*distill_sub || *stats_sub) return kExitConfig;
    return kExitFailure;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace tracespec::cli
