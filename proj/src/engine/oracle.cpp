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

#include "tracespec/engine/oracle.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "tracespec/core/codec.hpp"
#include "tracespec/core/error.hpp"
#include "tracespec/core/subprocess.hpp"

namespace tracespec::engine {

namespace {

const Value::List& list_arg(const std::vector<Value>& in) {
  if (in.size() != 1 || !in[0].is_list()) {
    throw Error(ErrorKind::kOracleCrash, "expected one list argument");
  }
  return in[0].as_list();
}

std::vector<std::int64_t> ints(const Value::List& xs) {
  std::vector<std::int64_t> out;
  for (const auto& v : xs) {
    if (!v.is_int()) throw Error(ErrorKind::kOracleCrash, "expected integers");
    out.push_back(v.as_int());
  }
  return out;
}

Value most_frequent(const std::vector<Value>& in) {
  auto xs = ints(list_arg(in));
  if (xs.empty()) throw Error(ErrorKind::kOracleCrash, "empty list");
  std::map<std::int64_t, int> counts;
  for (auto x : xs) ++counts[x];
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return Value(best->first);
}

struct Registry {
  std::mutex mu;
  std::map<std::string, BuiltinOracle> fns;

  Registry() {
    fns["most_frequent"] = most_frequent;
    fns["sum"] = [](const std::vector<Value>& in) {
      std::int64_t s = 0;
      for (auto x : ints(list_arg(in))) {
        if (__builtin_add_overflow(s, x, &s)) {
          throw Error(ErrorKind::kOracleCrash, "overflow");
        }
      }
      return Value(s);
    };
    fns["max"] = [](const std::vector<Value>& in) {
      auto xs = ints(list_arg(in));
      if (xs.empty()) throw Error(ErrorKind::kOracleCrash, "empty list");
      return Value(*std::max_element(xs.begin(), xs.end()));
    };
    fns["min"] = [](const std::vector<Value>& in) {
      auto xs = ints(list_arg(in));
      if (xs.empty()) throw Error(ErrorKind::kOracleCrash, "empty list");
      return Value(*std::min_element(xs.begin(), xs.end()));
    };
    fns["sort"] = [](const std::vector<Value>& in) {
      auto xs = ints(list_arg(in));
      std::sort(xs.begin(), xs.end());
      Value::List out(xs.begin(), xs.end());
      return Value(out);
    };
    fns["reverse"] = [](const std::vector<Value>& in) {
      Value::List xs = list_arg(in);
      std::reverse(xs.begin(), xs.end());
      return Value(xs);
    };
    fns["length"] = [](const std::vector<Value>& in) {
      return Value(static_cast<std::int64_t>(list_arg(in).size()));
    };
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

BuiltinOracle find_builtin(const std::string& name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.fns.find(name);
  return it == r.fns.end() ? BuiltinOracle() : it->second;
}

}  // namespace

void register_builtin_oracle(const std::string& name, BuiltinOracle fn) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.fns[name] = std::move(fn);
}

bool has_builtin_oracle(const std::string& name) {
  return static_cast<bool>(find_builtin(name));
}

void check_oracle(const OracleRef& oracle) {
  if (oracle.kind == OracleRef::Kind::kBuiltin) {
    if (!has_builtin_oracle(oracle.builtin_name)) {
      throw Error(ErrorKind::kConfigError,
                  "unknown builtin oracle '" + oracle.builtin_name + "'");
    }
  } else if (oracle.argv.empty()) {
    throw Error(ErrorKind::kConfigError, "empty oracle command");
  }
}

Value label_output(const OracleRef& oracle, const std::vector<Value>& input,
                   std::chrono::milliseconds timeout) {
  if (oracle.kind == OracleRef::Kind::kBuiltin) {
    BuiltinOracle fn = find_builtin(oracle.builtin_name);
    if (!fn) {
      throw Error(ErrorKind::kOracleCrash,
                  "unknown builtin oracle '" + oracle.builtin_name + "'");
    }
    try {
      return fn(input);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kOracleCrash) throw;
      throw Error(ErrorKind::kOracleCrash, e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorKind::kOracleCrash, e.what());
    }
  }

  std::string request = Json{{"input", inputs_to_json(input)}}.dump() + "\n";
  ProcessResult r;
  try {
    r = run_process(oracle.argv, request, timeout);
  } catch (const Error& e) {
    throw Error(ErrorKind::kOracleCrash, e.detail());
  }
  if (r.timed_out) {
    throw Error(ErrorKind::kOracleTimeout, oracle.argv.front());
  }
  if (r.exit_code != 0) {
    throw Error(ErrorKind::kOracleCrash,
                oracle.argv.front() + " exited " + std::to_string(r.exit_code) +
                    ": " + r.err.substr(0, 512));
  }
  try {
    return value_from_json(Json::parse(r.out).at("output"));
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kOracleCrash,
                std::string("unreadable oracle output: ") + e.what());
  }
}

}  // namespace tracespec::engine
