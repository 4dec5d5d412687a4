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

#include "tracespec/llm/parse.hpp"

#include <regex>

#include "tracespec/core/error.hpp"

namespace tracespec::llm {

namespace {

const std::regex& marker_regex() {
  static const std::regex re(R"(\[\[ ## ([A-Za-z0-9_]+) ## \]\])");
  return re;
}

std::string trim_newlines(std::string_view s) {
  while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

struct Fence {
  std::string info;
  std::string body;
  std::size_t body_offset;
};

/// Fenced blocks opened by a line starting with ``` and closed by the next
/// such line.
std::vector<Fence> fences(std::string_view text) {
  std::vector<Fence> out;
  std::size_t pos = 0;
  std::optional<Fence> open;
  std::size_t body_start = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    std::size_t indent = line.find_first_not_of(" \t");
    std::string_view stripped =
        indent == std::string_view::npos ? "" : line.substr(indent);
    if (stripped.rfind("```", 0) == 0) {
      if (!open) {
        std::string_view info = stripped.substr(3);
        while (!info.empty() && (info.back() == ' ' || info.back() == '\r')) {
          info.remove_suffix(1);
        }
        open = Fence{std::string(info), "", eol + 1};
        body_start = eol + 1;
      } else {
        std::size_t end = pos > 0 ? pos - 1 : 0;
        open->body = body_start <= end
                         ? std::string(text.substr(body_start, end - body_start))
                         : "";
        out.push_back(*open);
        open.reset();
      }
    }
    if (eol >= text.size()) break;
    pos = eol + 1;
  }
  return out;
}

}  // namespace

Fields parse_fielded(std::string_view text) {
  Fields fields;
  std::string owned(text);
  auto begin = std::sregex_iterator(owned.begin(), owned.end(), marker_regex());
  auto end = std::sregex_iterator();
  std::string current;
  std::size_t content_start = 0;
  bool have_current = false;
  for (auto it = begin; it != end; ++it) {
    const auto& m = *it;
    auto at = static_cast<std::size_t>(m.position(0));
    if (have_current) {
      fields.emplace_back(current, trim_newlines(std::string_view(owned).substr(
                                       content_start, at - content_start)));
    }
    std::string name = m[1].str();
    if (name == "completed") return fields;
    for (const auto& [existing, value] : fields) {
      if (existing == name) throw Error(ErrorKind::kDuplicateField, name);
    }
    current = name;
    have_current = true;
    content_start = at + static_cast<std::size_t>(m.length(0));
  }
  throw Error(ErrorKind::kMissingCompletedMarker,
              fields.empty() && !have_current ? "no field markers" : "");
}

std::string format_fielded(const Fields& fields) {
  std::string out;
  for (const auto& [name, value] : fields) {
    out += "[[ ## " + name + " ## ]]\n" + value + "\n\n";
  }
  return out + "[[ ## completed ## ]]";
}

const std::string* find_field(const Fields& fields, std::string_view name) {
  for (const auto& [n, v] : fields) {
    if (n == name) return &v;
  }
  return nullptr;
}

nlohmann::ordered_json parse_structured_block(std::string_view text) {
  auto blocks = fences(text);
  if (blocks.empty()) throw Error(ErrorKind::kNoBlockFound, "no fenced block");
  const Fence& f = blocks.front();
  try {
    return nlohmann::ordered_json::parse(f.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kDecodeError,
                "at byte " + std::to_string(e.byte) + " of block: " + e.what());
  }
}

std::optional<std::string> fenced_block(std::string_view text,
                                        std::string_view lang) {
  for (const auto& f : fences(text)) {
    if (f.info == lang) return f.body;
  }
  return std::nullopt;
}

}  // namespace tracespec::llm
