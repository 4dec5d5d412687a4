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

#ifndef TRACESPEC_SRC_LLM_TEMPLATES_DATA_HPP_
#define TRACESPEC_SRC_LLM_TEMPLATES_DATA_HPP_

#include <cstddef>

namespace tracespec::llm::detail {

struct TemplateText {
  const char* task;
  const char* system;
  const char* user;
  const char* response;
};

inline constexpr std::size_t kTaskTemplateCount = 11;

/// The eleven dataset tasks, in dataset-table order.
extern const TemplateText kTaskTemplates[kTaskTemplateCount];

}  // namespace tracespec::llm::detail

#endif  // TRACESPEC_SRC_LLM_TEMPLATES_DATA_HPP_
