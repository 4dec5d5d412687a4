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

#ifndef TRACESPEC_CORE_VALUE_HPP_
#define TRACESPEC_CORE_VALUE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace tracespec {

/// Concrete test datum: integer, boolean, text, or a list of values.
class Value {
 public:
  using List = std::vector<Value>;

  static constexpr int kMaxDepth = 8;

  Value() : data_(std::int64_t{0}) {}
  Value(std::int64_t i) : data_(i) {}  // NOLINT(google-explicit-constructor)
  Value(int i) : data_(std::int64_t{i}) {}  // NOLINT
  Value(bool b) : data_(b) {}  // NOLINT
  Value(std::string s) : data_(std::move(s)) {}  // NOLINT
  Value(const char* s) : data_(std::string(s)) {}  // NOLINT
  Value(List l) : data_(std::move(l)) {}  // NOLINT

  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_text() const { return std::holds_alternative<std::string>(data_); }
  bool is_list() const { return std::holds_alternative<List>(data_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const std::string& as_text() const { return std::get<std::string>(data_); }
  const List& as_list() const { return std::get<List>(data_); }

  /// 0 for scalars; 1 + the deepest element for lists.
  int depth() const;

  /// "Int", "Bool", "Text" or "List".
  std::string_view type_name() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<std::int64_t, bool, std::string, List> data_;
};

nlohmann::ordered_json to_json(const Value& value);

/// Decodes a JSON scalar/array. Floats, null and objects are rejected, as is
/// list nesting deeper than Value::kMaxDepth.
Value value_from_json(const nlohmann::ordered_json& json);

/// Compact JSON text, e.g. `[1,2,3]`.
std::string to_text(const Value& value);

/// True when `value` inhabits one of the built-in type tags
/// (Int, Bool, Text, List Int, List Text, List Bool, List (List Int), ...).
/// Unknown tags are accepted, since lean-dialect problems use free-form
/// Lean types.
bool conforms_to(const Value& value, std::string_view type_tag);

/// True for tags the built-in value model understands.
bool is_builtin_type_tag(std::string_view type_tag);

}  // namespace tracespec

#endif  // TRACESPEC_CORE_VALUE_HPP_
