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

// Per-test check propositions and the backends that decide them.
//
//   positive    pre(x) /\ post(x, y)
//   neg_input   not pre(x)
//   neg_output  pre(x) /\ not post(x, y~)
//
// Adversarial tests use their sub-kind.

#ifndef TRACESPEC_PROVER_PROVER_HPP_
#define TRACESPEC_PROVER_PROVER_HPP_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tracespec/core/model.hpp"
#include "tracespec/prover/minispec.hpp"

namespace tracespec::prover {

/// Name bound to the function result inside a mini-dialect postcondition.
inline constexpr const char* kResultVar = "y";

enum class PropositionKind { kPhiPos, kPhiNegIn, kPhiNegOut };

std::string_view to_string(PropositionKind kind);
PropositionKind proposition_kind_for(TestKind effective_kind);

/// A Lean theorem statement together with everything it depends on.
struct LeanStatement {
  /// Imports, aux definitions and the pre/post defs.
  std::string prelude;
  std::string theorem_name;
  /// The proposition itself, e.g. `f_precond [1, 2] ∧ f_postcond [1, 2] 2`.
  std::string statement;

  friend bool operator==(const LeanStatement&, const LeanStatement&) = default;
};

struct Proposition {
  PropositionKind kind = PropositionKind::kPhiPos;
  TestId test_id;
  std::variant<Expr, LeanStatement> payload;

  Dialect dialect() const {
    return std::holds_alternative<Expr>(payload) ? Dialect::kMini
                                                 : Dialect::kLean;
  }
};

/// Builds the kind-appropriate proposition with the test's values
/// substituted. Throws ArityMismatch, ParseError (mini text) or
/// LiteralRenderError (lean literals).
Proposition instantiate_proposition(const Specification& spec,
                                    const TestCase& test,
                                    const FunctionSignature& signature);

struct Verdict {
  VerdictTag tag = VerdictTag::kUnknown;
  std::string diagnostics;
};

enum class ProverStatus { kPass, kFail, kUnknown };

ProverStatus status_of(const Verdict& verdict);

class ProverBackend {
 public:
  virtual ~ProverBackend() = default;
  virtual Dialect dialect() const = 0;
  /// Safe to call concurrently. Throws DialectMismatch when the payload does
  /// not match dialect().
  virtual Verdict decide(const Proposition& prop) = 0;
};

Verdict decide(const Proposition& prop, ProverBackend& backend);

/// Total evaluation: never Unknown. An evaluation error (type error,
/// out-of-range nth, overflow) yields ProvedFalse with the error text.
class MiniBackend final : public ProverBackend {
 public:
  Dialect dialect() const override { return Dialect::kMini; }
  Verdict decide(const Proposition& prop) override;
};

/// Test seam: reports Unknown for the designated test ids and defers to the
/// wrapped backend otherwise.
class ForcedUnknownBackend final : public ProverBackend {
 public:
  ForcedUnknownBackend(std::shared_ptr<ProverBackend> inner,
                       std::set<TestId> unknown_ids)
      : inner_(std::move(inner)), unknown_ids_(std::move(unknown_ids)) {}

  Dialect dialect() const override { return inner_->dialect(); }
  Verdict decide(const Proposition& prop) override;

 private:
  std::shared_ptr<ProverBackend> inner_;
  std::set<TestId> unknown_ids_;
};

struct LeanConfig {
  /// The rendered file path is appended as the final argument.
  std::vector<std::string> command = {"lake", "env", "lean"};
  std::string tactic = "grind";
  std::chrono::milliseconds timeout = std::chrono::seconds(120);
  std::filesystem::path scratch_dir;  // empty: a fresh temp directory
  int pool_size = 1;
};

/// Full theorem source for one polarity of a statement.
std::string lean_theorem_source(const LeanStatement& statement,
                                const std::string& tactic, bool negated);

/// Theorem source for (spec, test): imports, precond_aux, postcond_aux, the
/// pre/post defs, then the theorem closed by `tactic`. Byte-stable.
std::string lean_render(const Specification& spec, const TestCase& test,
                        const FunctionSignature& signature,
                        const std::string& tactic = "grind");

/// Lean spelling of a type tag (Text becomes String).
std::string lean_type(std::string_view type_tag);

/// Renders a value as a Lean literal of `type_tag`. Throws
/// LiteralRenderError.
std::string lean_literal(const Value& value, std::string_view type_tag);

/// Runs the proposition and its negation (sequentially, full timeout each)
/// through an external Lean command; a bounded pool caps concurrent
/// subprocesses.
class LeanBackend final : public ProverBackend {
 public:
  explicit LeanBackend(LeanConfig config);

  Dialect dialect() const override { return Dialect::kLean; }
  Verdict decide(const Proposition& prop) override;

  const LeanConfig& config() const { return config_; }

 private:
  /// 1 proved, 0 not proved, -1 timed out.
  int attempt(const std::string& source, const std::string& stem,
              std::string& diagnostics);

  LeanConfig config_;
  std::mutex mu_;
  std::condition_variable cv_;
  int busy_ = 0;
  std::uint64_t counter_ = 0;
};

/// True when `program` resolves on PATH.
bool command_available(const std::string& program);

}  // namespace tracespec::prover

#endif  // TRACESPEC_PROVER_PROVER_HPP_
