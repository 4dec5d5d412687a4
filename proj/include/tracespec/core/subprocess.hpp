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

#ifndef TRACESPEC_CORE_SUBPROCESS_HPP_
#define TRACESPEC_CORE_SUBPROCESS_HPP_

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace tracespec {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Runs argv (PATH lookup on argv[0]) in its own process group, feeding
/// `input` on stdin. On timeout the whole group is killed and timed_out is
/// set. Throws Error(kBackendUnavailable) when the program cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view input,
                          std::chrono::milliseconds timeout);

}  // namespace tracespec

#endif  // TRACESPEC_CORE_SUBPROCESS_HPP_
