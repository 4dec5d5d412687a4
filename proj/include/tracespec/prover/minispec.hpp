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

// MiniSpec: a small decidable predicate language over Value, written in
// parenthesized prefix form:
//
//   (and (gt (len xs) 0)
//        (forall v xs (ge (count xs y) (count xs v))))
//
// Operators: eq ne lt le gt ge add sub mul len count member nth and or not
// implies forall list. Symbolic aliases = != < <= > >= + - * are accepted.
// Evaluation is strict (every operand is evaluated) and always terminates,
// since quantifiers range over finite lists.

#ifndef TRACESPEC_PROVER_MINISPEC_HPP_
#define TRACESPEC_PROVER_MINISPEC_HPP_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tracespec/core/value.hpp"

namespace tracespec::prover {

enum class Op {
  kLiteral,
  kVar,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAdd,
  kSub,
  kMul,
  kLen,
  kCount,
  kMember,
  kNth,
  kAnd,
  kOr,
  kNot,
  kImplies,
  kForall,
  kList,
};

std::string_view op_name(Op op);

struct Expr {
  Op op = Op::kLiteral;
  Value literal;
  /// Variable name (kVar) or bound variable (kForall).
  std::string name;
  /// kForall: {list, body}.
  std::vector<Expr> args;

  static Expr lit(Value v);
  static Expr var(std::string name);
  static Expr make(Op op, std::vector<Expr> args);
  static Expr forall(std::string bound, Expr list, Expr body);

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Throws Error(kParseError) with the offending offset.
Expr parse_minispec(std::string_view text);

/// Canonical prefix rendering; parse_minispec(print(e)) == e.
std::string print(const Expr& expr);

using Env = std::map<std::string, Value>;

/// Evaluates to a Value. Throws Error(kTypeError) whose detail names the
/// path (argument indices from the root) and the offending subexpression.
Value evaluate(const Expr& expr, const Env& env);

/// evaluate() constrained to a boolean result.
bool mini_eval(const Expr& expr, const Env& env);

std::set<std::string> free_variables(const Expr& expr);

/// Replaces free occurrences of env's variables by literals. Bound
/// variables shadow env entries.
Expr substitute(const Expr& expr, const Env& env);

}  // namespace tracespec::prover

#endif  // TRACESPEC_PROVER_MINISPEC_HPP_
