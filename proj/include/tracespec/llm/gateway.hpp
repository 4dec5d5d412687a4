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

#ifndef TRACESPEC_LLM_GATEWAY_HPP_
#define TRACESPEC_LLM_GATEWAY_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tracespec/llm/backend.hpp"
#include "tracespec/llm/prompts.hpp"

namespace tracespec::llm {

struct Exchange {
  CallTag tag;
  std::vector<ChatMessage> messages;
  Completion completion;
};

/// Renders a task prompt and sends it to a backend.
class Gateway {
 public:
  using Observer = std::function<void(const Exchange&)>;

  Gateway(std::shared_ptr<CompletionBackend> backend, CompletionParams params);

  /// Raw completion; the truncation flag is returned, not raised.
  Completion complete(const std::vector<ChatMessage>& messages,
                      const CallTag& tag);

  /// render + complete. Throws Error(kTokenLimit) on a truncated reply.
  std::string ask(TaskKind task, const std::string& problem_id,
                  const PromptContext& context);

  /// Called after every exchange; must be thread-safe.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  const CompletionParams& params() const { return params_; }

 private:
  std::shared_ptr<CompletionBackend> backend_;
  CompletionParams params_;
  Observer observer_;
};

}  // namespace tracespec::llm

#endif  // TRACESPEC_LLM_GATEWAY_HPP_
