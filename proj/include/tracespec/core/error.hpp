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

#ifndef TRACESPEC_CORE_ERROR_HPP_
#define TRACESPEC_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracespec {

/// Every failure the library reports carries one of these kinds so callers
/// (and tests) can branch on the category without parsing messages.
enum class ErrorKind {
  // core-model
  kInvalidValue,
  kInvalidModel,
  kUnmappedTest,
  kPartitionViolation,
  // prover
  kArityMismatch,
  kDialectMismatch,
  kParseError,
  kTypeError,
  kLiteralRenderError,
  kBackendUnavailable,
  // llm-gateway
  kMissingPlaceholder,
  kUnknownTask,
  kTransportError,
  kScriptExhausted,
  kTokenLimit,
  kMissingCompletedMarker,
  kDuplicateField,
  kNoBlockFound,
  kDecodeError,
  // refinement-engine
  kParseFailure,
  kEmptyDecomposition,
  kOracleCrash,
  kOracleTimeout,
  kMappingFailure,
  kInterrupted,
  // trajectory-store
  kDuplicateStep,
  kOutOfOrderStep,
  kStoreClosed,
  kIncomplete,
  kCorruptRecord,
  kIoError,
  // distillery
  kCheckpointFieldError,
  // cli / config
  kConfigError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace tracespec

#endif  // TRACESPEC_CORE_ERROR_HPP_
