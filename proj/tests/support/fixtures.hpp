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

#ifndef TRACESPEC_TESTS_FIXTURES_HPP_
#define TRACESPEC_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <unistd.h>

#include "tracespec/core/codec.hpp"
#include "tracespec/engine/engine.hpp"
#include "tracespec/llm/backend.hpp"
#include "tracespec/prover/prover.hpp"
#include "tracespec/store/store.hpp"

#ifndef TRACESPEC_TEST_DIR
#error "TRACESPEC_TEST_DIR must point at the tests directory"
#endif

namespace fixtures {

inline std::filesystem::path test_dir() { return TRACESPEC_TEST_DIR; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline tracespec::Problem worked_problem() {
  std::ifstream in(test_dir() / "fixtures/worked/bundle.jsonl");
  std::string line;
  std::getline(in, line);
  return tracespec::problem_from_json(tracespec::Json::parse(line));
}

inline std::filesystem::path worked_script() { return test_dir() / "fixtures/worked/script.jsonl"; }

inline std::shared_ptr<tracespec::llm::Gateway> scripted_gateway(
    std::vector<tracespec::llm::ScriptRecord> records) {
  auto backend = std::make_shared<tracespec::llm::ScriptedBackend>(std::move(records));
  return std::make_shared<tracespec::llm::Gateway>(backend, tracespec::llm::CompletionParams{});
}

inline tracespec::engine::EngineConfig worked_config() {
  tracespec::engine::EngineConfig c;
  c.max_test_gen_rounds = 1;
  return c;
}

inline tracespec::engine::EngineServices services(
    std::shared_ptr<tracespec::llm::Gateway> gateway,
    std::shared_ptr<tracespec::store::StepSink> sink = nullptr,
    std::shared_ptr<tracespec::prover::ProverBackend> prover = nullptr) {
  tracespec::engine::EngineServices s;
  s.gateway = std::move(gateway);
  s.prover = prover ? std::move(prover) : std::make_shared<tracespec::prover::MiniBackend>();
  s.sink = std::move(sink);
  return s;
}

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tracespec-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures

#endif  // TRACESPEC_TESTS_FIXTURES_HPP_
