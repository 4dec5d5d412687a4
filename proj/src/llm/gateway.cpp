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

#include "tracespec/llm/gateway.hpp"

#include "tracespec/core/error.hpp"

namespace tracespec::llm {

Gateway::Gateway(std::shared_ptr<CompletionBackend> backend,
                 CompletionParams params)
    : backend_(std::move(backend)), params_(std::move(params)) {
  params_.validate();
}

Completion Gateway::complete(const std::vector<ChatMessage>& messages,
                             const CallTag& tag) {
  Completion c = backend_->complete(messages, params_, tag);
  if (observer_) observer_(Exchange{tag, messages, c});
  return c;
}

std::string Gateway::ask(TaskKind task, const std::string& problem_id,
                         const PromptContext& context) {
  CallTag tag{task, problem_id};
  Completion c = complete(render(task, context), tag);
  if (c.truncated) {
    throw Error(ErrorKind::kTokenLimit,
                std::string(to_string(task)) + " reply truncated");
  }
  return c.text;
}

}  // namespace tracespec::llm
