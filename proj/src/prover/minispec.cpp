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

#include "tracespec/prover/minispec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "tracespec/core/error.hpp"

namespace tracespec::prover {

namespace {

struct OpInfo {
  Op op;
  std::string_view name;
  int min_args;
  int max_args;  // -1: unbounded
};

constexpr OpInfo kOps[] = {
    {Op::kEq, "eq", 2, 2},       {Op::kNe, "ne", 2, 2},
    {Op::kLt, "lt", 2, 2},       {Op::kLe, "le", 2, 2},
    {Op::kGt, "gt", 2, 2},       {Op::kGe, "ge", 2, 2},
    {Op::kAdd, "add", 2, 2},     {Op::kSub, "sub", 2, 2},
    {Op::kMul, "mul", 2, 2},     {Op::kLen, "len", 1, 1},
    {Op::kCount, "count", 2, 2}, {Op::kMember, "member", 2, 2},
    {Op::kNth, "nth", 2, 2},     {Op::kAnd, "and", 1, -1},
    {Op::kOr, "or", 1, -1},      {Op::kNot, "not", 1, 1},
    {Op::kImplies, "implies", 2, 2}, {Op::kList, "list", 0, -1},
};

constexpr std::pair<std::string_view, Op> kAliases[] = {
    {"=", Op::kEq},  {"==", Op::kEq}, {"!=", Op::kNe}, {"<", Op::kLt},
    {"<=", Op::kLe}, {">", Op::kGt},  {">=", Op::kGe}, {"+", Op::kAdd},
    {"-", Op::kSub}, {"*", Op::kMul}, {"=>", Op::kImplies},
};

const OpInfo* info_for(Op op) {
  for (const auto& info : kOps) {
    if (info.op == op) return &info;
  }
  return nullptr;
}

std::optional<Op> op_from_name(std::string_view name) {
  for (const auto& info : kOps) {
    if (info.name == name) return info.op;
  }
  for (const auto& [alias, op] : kAliases) {
    if (alias == name) return op;
  }
  if (name == "forall") return Op::kForall;
  return std::nullopt;
}

constexpr int kMaxParseDepth = 256;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr(0);
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::kParseError,
                why + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {  // line comment
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view atom() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
          c == ')' || c == '"' || c == ';') {
        break;
      }
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::string string_literal() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        char e = text_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unknown escape \\") + e);
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  static bool is_integer(std::string_view a) {
    std::size_t i = (a.size() > 1 && a[0] == '-') ? 1 : 0;
    if (i == a.size()) return false;
    return std::all_of(a.begin() + static_cast<std::ptrdiff_t>(i), a.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  }

  static bool is_identifier(std::string_view a) {
    if (a.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(a[0])) || a[0] == '_')) {
      return false;
    }
    return std::all_of(a.begin(), a.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
             c == '\'';
    });
  }

  Expr parse_expr(int depth) {
    if (depth > kMaxParseDepth) fail("expression nested too deeply");
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '"') return Expr::lit(Value(string_literal()));
    if (c != '(') {
      std::size_t start = pos_;
      std::string_view a = atom();
      if (a == "true") return Expr::lit(Value(true));
      if (a == "false") return Expr::lit(Value(false));
      if (is_integer(a)) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
        if (ec != std::errc() || ptr != a.data() + a.size()) {
          pos_ = start;
          fail("integer literal out of range");
        }
        return Expr::lit(Value(v));
      }
      if (!is_identifier(a)) {
        pos_ = start;
        fail("bad token '" + std::string(a) + "'");
      }
      return Expr::var(std::string(a));
    }
    ++pos_;  // '('
    skip_space();
    std::size_t head_pos = pos_;
    std::string_view head = atom();
    if (head.empty()) fail("expected an operator");
    auto op = op_from_name(head);
    if (!op) {
      pos_ = head_pos;
      fail("unknown operator '" + std::string(head) + "'");
    }
    Expr e;
    e.op = *op;
    if (*op == Op::kForall) {
      skip_space();
      std::string_view bound = atom();
      if (!is_identifier(bound)) fail("forall needs a bound variable name");
      e.name = std::string(bound);
    }
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail("missing ')'");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      e.args.push_back(parse_expr(depth + 1));
    }
    int n = static_cast<int>(e.args.size());
    if (e.op == Op::kForall) {
      if (n != 2) fail("forall takes a variable, a list and a body");
    } else {
      const OpInfo* info = info_for(e.op);
      if (n < info->min_args || (info->max_args >= 0 && n > info->max_args)) {
        fail(std::string(info->name) + " takes " +
             std::to_string(info->min_args) +
             (info->max_args == info->min_args ? "" : "+") + " arguments");
      }
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_value(const Value& v, std::string& out) {
  if (v.is_int()) {
    out += std::to_string(v.as_int());
  } else if (v.is_bool()) {
    out += v.as_bool() ? "true" : "false";
  } else if (v.is_text()) {
    out.push_back('"');
    for (char c : v.as_text()) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
      }
    }
    out.push_back('"');
  } else {
    out += "(list";
    for (const auto& e : v.as_list()) {
      out.push_back(' ');
      print_value(e, out);
    }
    out.push_back(')');
  }
}

void print_expr(const Expr& e, std::string& out) {
  switch (e.op) {
    case Op::kLiteral:
      print_value(e.literal, out);
      return;
    case Op::kVar:
      out += e.name;
      return;
    case Op::kForall:
      out += "(forall " + e.name;
      break;
    default:
      out.push_back('(');
      out += op_name(e.op);
  }
  for (const auto& a : e.args) {
    out.push_back(' ');
    print_expr(a, out);
  }
  out.push_back(')');
}

class Evaluator {
 public:
  explicit Evaluator(const Env& env) : env_(env) {}

  Value eval(const Expr& e, const std::string& path) {
    switch (e.op) {
      case Op::kLiteral:
        return e.literal;
      case Op::kVar: {
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
          if (it->first == e.name) return it->second;
        }
        auto found = env_.find(e.name);
        if (found == env_.end()) fail(e, path, "unbound variable " + e.name);
        return found->second;
      }
      case Op::kForall: {
        Value list = eval(e.args[0], path + ".0");
        if (!list.is_list()) fail(e.args[0], path + ".0", "forall over a non-list");
        bool all = true;
        for (const auto& element : list.as_list()) {
          bound_.emplace_back(e.name, element);
          Value body = eval(e.args[1], path + ".1");
          bound_.pop_back();
          if (!body.is_bool()) fail(e.args[1], path + ".1", "forall body is not boolean");
          all = all && body.as_bool();
        }
        return Value(all);
      }
      default:
        break;
    }

    std::vector<Value> v;
    v.reserve(e.args.size());
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      v.push_back(eval(e.args[i], path + "." + std::to_string(i)));
    }
    auto want_int = [&](std::size_t i) {
      if (!v[i].is_int()) {
        fail(e.args[i], path + "." + std::to_string(i),
             "expected Int, got " + std::string(v[i].type_name()));
      }
      return v[i].as_int();
    };
    auto want_bool = [&](std::size_t i) {
      if (!v[i].is_bool()) {
        fail(e.args[i], path + "." + std::to_string(i),
             "expected Bool, got " + std::string(v[i].type_name()));
      }
      return v[i].as_bool();
    };
    auto want_list = [&](std::size_t i) -> const Value::List& {
      if (!v[i].is_list()) {
        fail(e.args[i], path + "." + std::to_string(i),
             "expected List, got " + std::string(v[i].type_name()));
      }
      return v[i].as_list();
    };
    auto same_type = [&] {
      if (v[0].type_name() != v[1].type_name()) {
        fail(e, path, "comparing " + std::string(v[0].type_name()) + " with " +
                          std::string(v[1].type_name()));
      }
    };

    switch (e.op) {
      case Op::kEq: same_type(); return Value(v[0] == v[1]);
      case Op::kNe: same_type(); return Value(v[0] != v[1]);
      case Op::kLt: return Value(want_int(0) < want_int(1));
      case Op::kLe: return Value(want_int(0) <= want_int(1));
      case Op::kGt: return Value(want_int(0) > want_int(1));
      case Op::kGe: return Value(want_int(0) >= want_int(1));
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul: {
        std::int64_t a = want_int(0), b = want_int(1), r = 0;
        bool overflow = e.op == Op::kAdd   ? __builtin_add_overflow(a, b, &r)
                        : e.op == Op::kSub ? __builtin_sub_overflow(a, b, &r)
                                           : __builtin_mul_overflow(a, b, &r);
        if (overflow) fail(e, path, "integer overflow");
        return Value(r);
      }
      case Op::kLen:
        if (v[0].is_text()) return Value(static_cast<std::int64_t>(v[0].as_text().size()));
        return Value(static_cast<std::int64_t>(want_list(0).size()));
      case Op::kCount: {
        const auto& xs = want_list(0);
        return Value(static_cast<std::int64_t>(std::count(xs.begin(), xs.end(), v[1])));
      }
      case Op::kMember: {
        const auto& xs = want_list(1);
        return Value(std::find(xs.begin(), xs.end(), v[0]) != xs.end());
      }
      case Op::kNth: {
        const auto& xs = want_list(0);
        std::int64_t i = want_int(1);
        if (i < 0 || i >= static_cast<std::int64_t>(xs.size())) {
          fail(e, path, "index " + std::to_string(i) + " out of range");
        }
        return xs[static_cast<std::size_t>(i)];
      }
      case Op::kAnd: {
        bool r = true;
        for (std::size_t i = 0; i < v.size(); ++i) r = want_bool(i) && r;
        return Value(r);
      }
      case Op::kOr: {
        bool r = false;
        for (std::size_t i = 0; i < v.size(); ++i) r = want_bool(i) || r;
        return Value(r);
      }
      case Op::kNot: return Value(!want_bool(0));
      case Op::kImplies: {
        bool a = want_bool(0);
        bool b = want_bool(1);
        return Value(!a || b);
      }
      case Op::kList: return Value(Value::List(v.begin(), v.end()));
      default: break;
    }
    fail(e, path, "unsupported operator");
  }

 private:
  [[noreturn]] static void fail(const Expr& e, const std::string& path,
                                const std::string& why) {
    throw Error(ErrorKind::kTypeError, path + ": " + why + " in " + print(e));
  }

  const Env& env_;
  std::vector<std::pair<std::string, Value>> bound_;
};

void collect_free(const Expr& e, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  if (e.op == Op::kVar) {
    if (std::find(bound.begin(), bound.end(), e.name) == bound.end()) {
      out.insert(e.name);
    }
    return;
  }
  if (e.op == Op::kForall) {
    collect_free(e.args[0], bound, out);
    bound.push_back(e.name);
    collect_free(e.args[1], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& a : e.args) collect_free(a, bound, out);
}

Expr substitute_impl(const Expr& e, const Env& env,
                     std::vector<std::string>& bound) {
  if (e.op == Op::kVar) {
    if (std::find(bound.begin(), bound.end(), e.name) != bound.end()) return e;
    auto it = env.find(e.name);
    return it == env.end() ? e : Expr::lit(it->second);
  }
  Expr out = e;
  if (e.op == Op::kForall) {
    out.args[0] = substitute_impl(e.args[0], env, bound);
    bound.push_back(e.name);
    out.args[1] = substitute_impl(e.args[1], env, bound);
    bound.pop_back();
    return out;
  }
  for (auto& a : out.args) a = substitute_impl(a, env, bound);
  return out;
}

}  // namespace

std::string_view op_name(Op op) {
  switch (op) {
    case Op::kLiteral: return "literal";
    case Op::kVar: return "var";
    case Op::kForall: return "forall";
    default: break;
  }
  const OpInfo* info = info_for(op);
  return info ? info->name : "?";
}

Expr Expr::lit(Value v) {
  Expr e;
  e.op = Op::kLiteral;
  e.literal = std::move(v);
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.op = Op::kVar;
  e.name = std::move(name);
  return e;
}

Expr Expr::make(Op op, std::vector<Expr> args) {
  Expr e;
  e.op = op;
  e.args = std::move(args);
  return e;
}

Expr Expr::forall(std::string bound, Expr list, Expr body) {
  Expr e;
  e.op = Op::kForall;
  e.name = std::move(bound);
  e.args.push_back(std::move(list));
  e.args.push_back(std::move(body));
  return e;
}

Expr parse_minispec(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Expr& expr) {
  std::string out;
  print_expr(expr, out);
  return out;
}

Value evaluate(const Expr& expr, const Env& env) {
  return Evaluator(env).eval(expr, "$");
}

bool mini_eval(const Expr& expr, const Env& env) {
  Value v = evaluate(expr, env);
  if (!v.is_bool()) {
    throw Error(ErrorKind::kTypeError,
                "$: expected a Bool result, got " + std::string(v.type_name()) +
                    " in " + print(expr));
  }
  return v.as_bool();
}

std::set<std::string> free_variables(const Expr& expr) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(expr, bound, out);
  return out;
}

Expr substitute(const Expr& expr, const Env& env) {
  std::vector<std::string> bound;
  return substitute_impl(expr, env, bound);
}

}  // namespace tracespec::prover
