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

#include "tracespec/core/value.hpp"

#include <algorithm>
#include <optional>

#include "tracespec/core/error.hpp"

namespace tracespec {

int Value::depth() const {
  if (!is_list()) return 0;
  int deepest = 0;
  for (const auto& element : as_list()) {
    deepest = std::max(deepest, element.depth());
  }
  return deepest + 1;
}

std::string_view Value::type_name() const {
  if (is_int()) return "Int";
  if (is_bool()) return "Bool";
  if (is_text()) return "Text";
  return "List";
}

nlohmann::ordered_json to_json(const Value& value) {
  if (value.is_int()) return value.as_int();
  if (value.is_bool()) return value.as_bool();
  if (value.is_text()) return value.as_text();
  auto array = nlohmann::ordered_json::array();
  for (const auto& element : value.as_list()) array.push_back(to_json(element));
  return array;
}

namespace {

Value decode(const nlohmann::ordered_json& json, int depth) {
  if (json.is_boolean()) return Value(json.get<bool>());
  if (json.is_number_integer()) {
    if (json.is_number_unsigned() &&
        json.get<std::uint64_t>() >
            static_cast<std::uint64_t>(INT64_MAX)) {
      throw Error(ErrorKind::kInvalidValue, "integer out of range");
    }
    return Value(json.get<std::int64_t>());
  }
  if (json.is_string()) return Value(json.get<std::string>());
  if (json.is_array()) {
    if (depth >= Value::kMaxDepth) {
      throw Error(ErrorKind::kInvalidValue,
                  "list nesting deeper than " +
                      std::to_string(Value::kMaxDepth));
    }
    Value::List list;
    list.reserve(json.size());
    for (const auto& element : json) list.push_back(decode(element, depth + 1));
    return Value(std::move(list));
  }
  throw Error(ErrorKind::kInvalidValue,
              "unsupported JSON value: " + json.dump());
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  return text;
}

// Strips one pair of enclosing parentheses, e.g. "(List Int)" -> "List Int".
std::string_view unparen(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    return trim(text.substr(1, text.size() - 2));
  }
  return text;
}

std::optional<std::string_view> list_element_tag(std::string_view tag) {
  tag = unparen(tag);
  for (std::string_view prefix : {"List ", "Array "}) {
    if (tag.substr(0, prefix.size()) == prefix) {
      return tag.substr(prefix.size());
    }
  }
  return std::nullopt;
}

}  // namespace

Value value_from_json(const nlohmann::ordered_json& json) {
  return decode(json, 0);
}

std::string to_text(const Value& value) { return to_json(value).dump(); }

bool is_builtin_type_tag(std::string_view type_tag) {
  type_tag = unparen(type_tag);
  if (type_tag == "Int" || type_tag == "Bool" || type_tag == "Text" ||
      type_tag == "Nat" || type_tag == "String") {
    return true;
  }
  if (auto element = list_element_tag(type_tag)) {
    return is_builtin_type_tag(*element);
  }
  return false;
}

bool conforms_to(const Value& value, std::string_view type_tag) {
  type_tag = unparen(type_tag);
  if (type_tag == "Int") return value.is_int();
  if (type_tag == "Nat") return value.is_int() && value.as_int() >= 0;
  if (type_tag == "Bool") return value.is_bool();
  if (type_tag == "Text" || type_tag == "String") return value.is_text();
  if (auto element = list_element_tag(type_tag)) {
    if (!value.is_list()) return false;
    return std::all_of(value.as_list().begin(), value.as_list().end(),
                       [&](const Value& v) { return conforms_to(v, *element); });
  }
  return true;
}

}  // namespace tracespec
