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

#include "tracespec/prover/prover.hpp"

#include <unistd.h>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tracespec/core/error.hpp"
#include "tracespec/core/subprocess.hpp"

namespace tracespec::prover {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

/// Strips redundant outer parentheses from a type tag.
std::string_view strip_parens(std::string_view tag) {
  tag = trim(tag);
  while (tag.size() >= 2 && tag.front() == '(' && tag.back() == ')') {
    int depth = 0;
    bool encloses = true;
    for (std::size_t i = 0; i < tag.size(); ++i) {
      if (tag[i] == '(') ++depth;
      if (tag[i] == ')') --depth;
      if (depth == 0 && i + 1 < tag.size()) {
        encloses = false;
        break;
      }
    }
    if (!encloses) break;
    tag = trim(tag.substr(1, tag.size() - 2));
  }
  return tag;
}

std::string as_argument(std::string literal) {
  if (!literal.empty() && literal.front() == '-') return "(" + literal + ")";
  return literal;
}

std::string sanitize(std::string_view id) {
  std::string out;
  for (char c : id) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

void check_arity(const TestCase& test, const FunctionSignature& signature) {
  if (test.input.size() != signature.input_params.size()) {
    throw Error(ErrorKind::kArityMismatch,
                "test " + test.id + " has " + std::to_string(test.input.size()) +
                    " inputs, signature " +
                    std::to_string(signature.input_params.size()));
  }
}

const Value& output_of(const TestCase& test) {
  if (!test.output) {
    throw Error(ErrorKind::kInvalidModel, "test " + test.id + " has no output");
  }
  return *test.output;
}

Expr parse_clause(const std::string& text) {
  if (trim(text).empty()) return Expr::lit(Value(true));
  return parse_minispec(text);
}

Proposition instantiate_mini(const Specification& spec, const TestCase& test,
                             const FunctionSignature& signature,
                             PropositionKind kind) {
  Expr pre = parse_clause(spec.precond);
  Expr post = parse_clause(spec.postcond);
  Env env;
  for (std::size_t i = 0; i < test.input.size(); ++i) {
    env[signature.input_params[i].name] = test.input[i];
  }
  Expr phi;
  switch (kind) {
    case PropositionKind::kPhiPos:
      env[kResultVar] = output_of(test);
      phi = Expr::make(Op::kAnd, {pre, post});
      break;
    case PropositionKind::kPhiNegIn:
      phi = Expr::make(Op::kNot, {pre});
      break;
    case PropositionKind::kPhiNegOut:
      env[kResultVar] = output_of(test);
      phi = Expr::make(Op::kAnd, {pre, Expr::make(Op::kNot, {post})});
      break;
  }
  return Proposition{kind, test.id, substitute(phi, env)};
}

std::string lean_defs(const Specification& spec,
                      const FunctionSignature& signature) {
  std::ostringstream out;
  for (const auto* section : {&spec.imports, &spec.precond_aux, &spec.postcond_aux}) {
    auto body = trim(*section);
    if (!body.empty()) out << body << "\n\n";
  }
  std::string binders;
  for (const auto& p : signature.input_params) {
    binders += " (" + p.name + " : " + lean_type(p.type_tag) + ")";
  }
  const auto& fn = signature.function_name;
  out << "@[reducible, simp]\n"
      << "def " << fn << "_precond" << binders << " : Prop :=\n"
      << "  " << (trim(spec.precond).empty() ? "True" : trim(spec.precond))
      << "\n\n"
      << "@[reducible, simp]\n"
      << "def " << fn << "_postcond" << binders << " (result : "
      << lean_type(signature.output_type) << ") : Prop :=\n"
      << "  " << (trim(spec.postcond).empty() ? "True" : trim(spec.postcond))
      << "\n\n";
  return out.str();
}

LeanStatement instantiate_lean_statement(const Specification& spec,
                                         const TestCase& test,
                                         const FunctionSignature& signature,
                                         PropositionKind kind) {
  std::string args;
  for (std::size_t i = 0; i < test.input.size(); ++i) {
    args += " " + as_argument(lean_literal(test.input[i],
                                           signature.input_params[i].type_tag));
  }
  const auto& fn = signature.function_name;
  std::string pre = fn + "_precond" + args;
  auto post = [&] {
    return fn + "_postcond" + args + " " +
           as_argument(lean_literal(output_of(test), signature.output_type));
  };
  LeanStatement st;
  st.prelude = lean_defs(spec, signature);
  st.theorem_name = fn + "_" + sanitize(test.id) + "_" +
                    std::string(to_string(kind));
  switch (kind) {
    case PropositionKind::kPhiPos:
      st.statement = "(" + pre + ") ∧ (" + post() + ")";
      break;
    case PropositionKind::kPhiNegIn:
      st.statement = "¬ (" + pre + ")";
      break;
    case PropositionKind::kPhiNegOut:
      st.statement = "(" + pre + ") ∧ ¬ (" + post() + ")";
      break;
  }
  return st;
}

}  // namespace

std::string lean_type(std::string_view tag) {
  // Text is this tool's name for Lean's String.
  std::string out;
  std::size_t i = 0;
  while (i < tag.size()) {
    if (tag.compare(i, 4, "Text") == 0 &&
        (i == 0 || !std::isalnum(static_cast<unsigned char>(tag[i - 1]))) &&
        (i + 4 == tag.size() ||
         !std::isalnum(static_cast<unsigned char>(tag[i + 4])))) {
      out += "String";
      i += 4;
    } else {
      out.push_back(tag[i++]);
    }
  }
  return out;
}

std::string_view to_string(PropositionKind kind) {
  switch (kind) {
    case PropositionKind::kPhiPos: return "phi_pos";
    case PropositionKind::kPhiNegIn: return "phi_neg_in";
    case PropositionKind::kPhiNegOut: return "phi_neg_out";
  }
  return "?";
}

PropositionKind proposition_kind_for(TestKind effective_kind) {
  switch (effective_kind) {
    case TestKind::kPositive: return PropositionKind::kPhiPos;
    case TestKind::kNegInput: return PropositionKind::kPhiNegIn;
    case TestKind::kNegOutput: return PropositionKind::kPhiNegOut;
    case TestKind::kAdversarial: break;
  }
  throw Error(ErrorKind::kInvalidModel, "adversarial test without a sub-kind");
}

Proposition instantiate_proposition(const Specification& spec,
                                    const TestCase& test,
                                    const FunctionSignature& signature) {
  check_arity(test, signature);
  PropositionKind kind = proposition_kind_for(test.effective_kind());
  if (spec.dialect == Dialect::kMini) {
    return instantiate_mini(spec, test, signature, kind);
  }
  return Proposition{kind, test.id,
                     instantiate_lean_statement(spec, test, signature, kind)};
}

ProverStatus status_of(const Verdict& verdict) {
  switch (verdict.tag) {
    case VerdictTag::kProvedTrue: return ProverStatus::kPass;
    case VerdictTag::kProvedFalse: return ProverStatus::kFail;
    case VerdictTag::kUnknown: break;
  }
  return ProverStatus::kUnknown;
}

Verdict decide(const Proposition& prop, ProverBackend& backend) {
  return backend.decide(prop);
}

Verdict MiniBackend::decide(const Proposition& prop) {
  const Expr* expr = std::get_if<Expr>(&prop.payload);
  if (!expr) {
    throw Error(ErrorKind::kDialectMismatch,
                "mini backend given a lean proposition for " + prop.test_id);
  }
  try {
    bool holds = mini_eval(*expr, {});
    return Verdict{holds ? VerdictTag::kProvedTrue : VerdictTag::kProvedFalse,
                   ""};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kTypeError) throw;
    return Verdict{VerdictTag::kProvedFalse, e.what()};
  }
}

Verdict ForcedUnknownBackend::decide(const Proposition& prop) {
  if (unknown_ids_.count(prop.test_id)) {
    return Verdict{VerdictTag::kUnknown, "forced inconclusive"};
  }
  return inner_->decide(prop);
}

std::string lean_literal(const Value& value, std::string_view type_tag) {
  std::string_view tag = strip_parens(type_tag);
  auto fail = [&]() -> std::string {
    throw Error(ErrorKind::kLiteralRenderError,
                to_text(value) + " as " + std::string(type_tag));
  };
  if (tag == "Int") {
    if (!value.is_int()) fail();
    return std::to_string(value.as_int());
  }
  if (tag == "Nat") {
    if (!value.is_int() || value.as_int() < 0) fail();
    return std::to_string(value.as_int());
  }
  if (tag == "Bool") {
    if (!value.is_bool()) fail();
    return value.as_bool() ? "true" : "false";
  }
  if (tag == "Text" || tag == "String") {
    if (!value.is_text()) fail();
    std::string out = "\"";
    for (char c : value.as_text()) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
      }
    }
    return out + "\"";
  }
  bool is_list = tag.rfind("List ", 0) == 0;
  bool is_array = tag.rfind("Array ", 0) == 0;
  if (is_list || is_array) {
    if (!value.is_list()) fail();
    std::string_view elem = strip_parens(tag.substr(is_list ? 5 : 6));
    if (value.as_list().empty()) {
      return std::string("(") + (is_list ? "[]" : "#[]") + " : " +
             lean_type(tag) + ")";
    }
    std::string out = is_list ? "[" : "#[";
    bool first = true;
    for (const auto& e : value.as_list()) {
      if (!first) out += ", ";
      first = false;
      out += lean_literal(e, elem);
    }
    return out + "]";
  }
  return fail();
}

std::string lean_theorem_source(const LeanStatement& statement,
                                const std::string& tactic, bool negated) {
  std::string out = statement.prelude;
  out += "theorem " + statement.theorem_name + (negated ? "_neg" : "") + " : ";
  out += negated ? "¬ (" + statement.statement + ")" : statement.statement;
  out += " := by\n  " + tactic + "\n";
  return out;
}

std::string lean_render(const Specification& spec, const TestCase& test,
                        const FunctionSignature& signature,
                        const std::string& tactic) {
  if (spec.dialect != Dialect::kLean) {
    throw Error(ErrorKind::kDialectMismatch, "lean_render needs a lean spec");
  }
  check_arity(test, signature);
  auto kind = proposition_kind_for(test.effective_kind());
  return lean_theorem_source(
      instantiate_lean_statement(spec, test, signature, kind), tactic, false);
}

LeanBackend::LeanBackend(LeanConfig config) : config_(std::move(config)) {
  if (config_.pool_size < 1) config_.pool_size = 1;
  if (config_.scratch_dir.empty()) {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "tracespec-lean-XXXXXX")
            .string();
    if (!::mkdtemp(tmpl.data())) {
      throw Error(ErrorKind::kBackendUnavailable, "cannot create scratch dir");
    }
    config_.scratch_dir = tmpl;
  }
  std::filesystem::create_directories(config_.scratch_dir);
}

int LeanBackend::attempt(const std::string& source, const std::string& stem,
                         std::string& diagnostics) {
  auto path = config_.scratch_dir / (stem + ".lean");
  {
    std::ofstream f(path, std::ios::binary);
    f << source;
    if (!f) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  }
  auto argv = config_.command;
  argv.push_back(path.string());
  ProcessResult r = run_process(argv, "", config_.timeout);
  if (r.timed_out) return -1;
  if (r.exit_code != 0) diagnostics += r.out + r.err;
  return r.exit_code == 0 ? 1 : 0;
}

Verdict LeanBackend::decide(const Proposition& prop) {
  const auto* st = std::get_if<LeanStatement>(&prop.payload);
  if (!st) {
    throw Error(ErrorKind::kDialectMismatch,
                "lean backend given a mini proposition for " + prop.test_id);
  }
  if (config_.timeout.count() <= 0) {
    return Verdict{VerdictTag::kUnknown, "no automation budget"};
  }

  std::uint64_t slot;
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return busy_ < config_.pool_size; });
    ++busy_;
    slot = counter_++;
  }
  struct Release {
    LeanBackend* self;
    ~Release() {
      std::lock_guard lock(self->mu_);
      --self->busy_;
      self->cv_.notify_one();
    }
  } release{this};

  std::string stem = sanitize(st->theorem_name) + "_" + std::to_string(slot);
  std::string diagnostics;
  int pos = attempt(lean_theorem_source(*st, config_.tactic, false), stem,
                    diagnostics);
  if (pos == 1) return Verdict{VerdictTag::kProvedTrue, ""};
  int neg = attempt(lean_theorem_source(*st, config_.tactic, true),
                    stem + "_neg", diagnostics);
  if (neg == 1) return Verdict{VerdictTag::kProvedFalse, diagnostics};
  if (pos < 0 || neg < 0) diagnostics += "\n(timed out)";
  return Verdict{VerdictTag::kUnknown, diagnostics};
}

bool command_available(const std::string& program) {
  if (program.find('/') != std::string::npos) {
    return ::access(program.c_str(), X_OK) == 0;
  }
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    if (::access((std::filesystem::path(dir) / program).c_str(), X_OK) == 0) {
      return true;
    }
  }
  return false;
}

}  // namespace tracespec::prover
