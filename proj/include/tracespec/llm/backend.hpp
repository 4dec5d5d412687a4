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

#ifndef TRACESPEC_LLM_BACKEND_HPP_
#define TRACESPEC_LLM_BACKEND_HPP_

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracespec/llm/prompts.hpp"

namespace tracespec::llm {

struct CompletionParams {
  double temperature = 0.3;
  int max_tokens = 10000;
  std::string model_id;

  /// Throws Error(kConfigError).
  void validate() const;
};

/// Identifies a call for scripted replay.
struct CallTag {
  TaskKind task = TaskKind::kArDecomposition;
  std::string problem_id;
};

struct Completion {
  std::string text;
  bool truncated = false;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  /// Safe to call concurrently.
  virtual Completion complete(const std::vector<ChatMessage>& messages,
                              const CompletionParams& params,
                              const CallTag& tag) = 0;
};

struct ScriptRecord {
  TaskKind task = TaskKind::kArDecomposition;
  /// Per-(problem, task) call index, 0-based; absent matches any call.
  std::optional<int> ordinal;
  /// Absent matches any problem.
  std::optional<std::string> problem;
  std::string response_text;
  bool truncated = false;
};

/// Replays canned replies. A call takes the first unused record with a
/// matching task, problem and ordinal; none left raises ScriptExhausted.
class ScriptedBackend final : public CompletionBackend {
 public:
  explicit ScriptedBackend(std::vector<ScriptRecord> records);

  /// One JSON record per line: {task, ordinal?, problem?, response_text,
  /// truncated?}. Blank lines are skipped.
  static std::vector<ScriptRecord> load(const std::filesystem::path& path);
  static std::vector<ScriptRecord> parse(std::string_view jsonl);

  Completion complete(const std::vector<ChatMessage>& messages,
                      const CompletionParams& params,
                      const CallTag& tag) override;

  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::vector<ScriptRecord> records_;
  std::vector<bool> used_;
  std::map<std::pair<std::string, TaskKind>, int> calls_;
};

/// Wraps a callable; handy in tests.
class FunctionBackend final : public CompletionBackend {
 public:
  using Fn = std::function<Completion(const std::vector<ChatMessage>&,
                                      const CallTag&)>;
  explicit FunctionBackend(Fn fn) : fn_(std::move(fn)) {}

  Completion complete(const std::vector<ChatMessage>& messages,
                      const CompletionParams&, const CallTag& tag) override {
    return fn_(messages, tag);
  }

 private:
  Fn fn_;
};

struct RemoteConfig {
  /// Full URL of the chat-completions endpoint, http:// or https://.
  std::string endpoint;
  std::string auth_header = "Authorization";
  /// Prepended to the secret, e.g. "Bearer ".
  std::string auth_prefix = "Bearer ";
  /// Environment variable holding the secret; empty sends no auth header.
  std::string auth_env;
  std::chrono::seconds timeout{600};
  /// 1 means no retries; >1 enables exponential backoff.
  int attempts = 1;
  std::chrono::milliseconds backoff{500};
};

/// Generic chat-completion wire shape:
///   request  {model, messages:[{role, content}], temperature, max_tokens}
///   response {choices:[{message:{content}, finish_reason}]}
/// finish_reason "length" marks the reply truncated.
class RemoteBackend final : public CompletionBackend {
 public:
  explicit RemoteBackend(RemoteConfig config);

  Completion complete(const std::vector<ChatMessage>& messages,
                      const CompletionParams& params,
                      const CallTag& tag) override;

 private:
  Completion attempt(const std::string& body);

  RemoteConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

}  // namespace tracespec::llm

#endif  // TRACESPEC_LLM_BACKEND_HPP_
