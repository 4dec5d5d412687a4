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

#ifndef TRACESPEC_CLI_CLI_HPP_
#define TRACESPEC_CLI_CLI_HPP_

#include <atomic>
#include <iosfwd>

namespace tracespec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInterrupted = 130;

/// Entry point of the `tracespec` command: synth, distill, stats, replay.
/// `cancel`, when given, stops a running synth (Ctrl-C).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        std::atomic<bool>* cancel = nullptr);

}  // namespace tracespec::cli

#endif  // TRACESPEC_CLI_CLI_HPP_
