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

// Black-box reference functions used only to label outputs.

#ifndef TRACESPEC_ENGINE_ORACLE_HPP_
#define TRACESPEC_ENGINE_ORACLE_HPP_

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "tracespec/core/model.hpp"

namespace tracespec::engine {

using BuiltinOracle = std::function<Value(const std::vector<Value>&)>;

/// Thread-safe registry. Built-ins: most_frequent (ties to the smallest
/// value; empty input crashes), sum, max, min, sort, reverse, length.
void register_builtin_oracle(const std::string& name, BuiltinOracle fn);
bool has_builtin_oracle(const std::string& name);

/// Throws Error(kConfigError) for an unknown builtin or empty command.
void check_oracle(const OracleRef& oracle);

/// y := O(x). Command oracles get {"input": [...]} on stdin and must print
/// {"output": v}. Throws OracleCrash or OracleTimeout.
Value label_output(const OracleRef& oracle, const std::vector<Value>& input,
                   std::chrono::milliseconds timeout = std::chrono::seconds(10));

}  // namespace tracespec::engine

#endif  // TRACESPEC_ENGINE_ORACLE_HPP_
