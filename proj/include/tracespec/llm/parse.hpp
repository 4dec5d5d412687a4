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

// Parsers for completion text: `[[ ## name ## ]]` fielded replies and
// fenced code blocks.

#ifndef TRACESPEC_LLM_PARSE_HPP_
#define TRACESPEC_LLM_PARSE_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace tracespec::llm {

using Fields = std::vector<std::pair<std::string, std::string>>;

/// Fields in order of appearance, each stripped of leading and trailing
/// line breaks (indentation is kept). Requires the `completed` marker; text after it is
/// ignored. Throws MissingCompletedMarker or DuplicateField.
Fields parse_fielded(std::string_view text);

/// Inverse of parse_fielded: markers, values, then the completed marker.
std::string format_fielded(const Fields& fields);

const std::string* find_field(const Fields& fields, std::string_view name);

/// Decodes the first fenced block (any info string). Throws NoBlockFound or
/// DecodeError with the byte offset inside the block.
nlohmann::ordered_json parse_structured_block(std::string_view text);

/// Body of the first fenced block whose info string is `lang`.
std::optional<std::string> fenced_block(std::string_view text,
                                        std::string_view lang);

}  // namespace tracespec::llm

#endif  // TRACESPEC_LLM_PARSE_HPP_
