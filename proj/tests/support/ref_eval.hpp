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

// Reference evaluator for check propositions, written separately from the
// prover: a generic s-expression reader plus a direct interpreter over the
// spec text. Used to cross-check prover verdicts.

#ifndef TRACESPEC_TESTS_REF_EVAL_HPP_
#define TRACESPEC_TESTS_REF_EVAL_HPP_

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ref {

struct Sx {
  std::string atom;  // empty for a list node
  std::vector<Sx> items;
  bool is_atom() const { return !atom.empty(); }
};

struct Bad : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Sx read_sx(const std::string& s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i >= s.size()) throw Bad("eof");
  if (s[i] == '(') {
    ++i;
    Sx node;
    for (;;) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i >= s.size()) throw Bad("unclosed");
      if (s[i] == ')') {
        ++i;
        return node;
      }
      node.items.push_back(read_sx(s, i));
    }
  }
  if (s[i] == ')') throw Bad("stray )");
  std::size_t j = i;
  while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
         s[j] != ')') {
    ++j;
  }
  Sx a;
  a.atom = s.substr(i, j - i);
  i = j;
  return a;
}

inline Sx read_all(const std::string& s) {
  std::size_t i = 0;
  Sx x = read_sx(s, i);
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i != s.size()) throw Bad("trailing text");
  return x;
}

/// Int, Bool or List.
struct V {
  enum Tag { I, B, L } tag = I;
  std::int64_t i = 0;
  bool b = false;
  std::vector<V> l;

  static V mk_int(std::int64_t x) { V v; v.tag = I; v.i = x; return v; }
  static V mk_bool(bool x) { V v; v.tag = B; v.b = x; return v; }
  static V mk_list(std::vector<V> x) { V v; v.tag = L; v.l = std::move(x); return v; }

  bool operator==(const V& o) const {
    if (tag != o.tag) return false;
    if (tag == I) return i == o.i;
    if (tag == B) return b == o.b;
    return l == o.l;
  }
};

using Scope = std::vector<std::pair<std::string, V>>;

inline bool is_number(const std::string& a) {
  std::size_t k = (a.size() > 1 && a[0] == '-') ? 1 : 0;
  if (k == a.size()) return false;
  for (; k < a.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(a[k]))) return false;
  }
  return true;
}

inline V run(const Sx& x, Scope& scope) {
  if (x.is_atom()) {
    if (x.atom == "true") return V::mk_bool(true);
    if (x.atom == "false") return V::mk_bool(false);
    if (is_number(x.atom)) return V::mk_int(std::stoll(x.atom));
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == x.atom) return it->second;
    }
    throw Bad("unbound " + x.atom);
  }
  if (x.items.empty() || !x.items[0].is_atom()) throw Bad("bad head");
  const std::string& f = x.items[0].atom;
  std::size_t n = x.items.size() - 1;
  if (f == "forall") {
    if (n != 3 || !x.items[1].is_atom()) throw Bad("forall shape");
    V xs = run(x.items[2], scope);
    if (xs.tag != V::L) throw Bad("forall domain");
    bool all = true;
    for (const auto& e : xs.l) {
      scope.emplace_back(x.items[1].atom, e);
      V body = run(x.items[3], scope);
      scope.pop_back();
      if (body.tag != V::B) throw Bad("forall body");
      if (!body.b) all = false;
    }
    return V::mk_bool(all);
  }
  std::vector<V> a;
  for (std::size_t k = 1; k <= n; ++k) a.push_back(run(x.items[k], scope));
  auto I = [&](std::size_t k) {
    if (a[k].tag != V::I) throw Bad("want int");
    return a[k].i;
  };
  auto B = [&](std::size_t k) {
    if (a[k].tag != V::B) throw Bad("want bool");
    return a[k].b;
  };
  auto L = [&](std::size_t k) -> const std::vector<V>& {
    if (a[k].tag != V::L) throw Bad("want list");
    return a[k].l;
  };
  auto arity = [&](std::size_t want) {
    if (n != want) throw Bad("arity of " + f);
  };
  if (f == "list") return V::mk_list(a);
  if (f == "and" || f == "or") {
    if (n < 1) throw Bad("arity");
    bool acc = f == "and";
    for (std::size_t k = 0; k < n; ++k) {
      bool v = B(k);
      acc = f == "and" ? (acc && v) : (acc || v);
    }
    return V::mk_bool(acc);
  }
  if (f == "not") { arity(1); return V::mk_bool(!B(0)); }
  if (f == "=>" || f == "implies") { arity(2); bool p = B(0); bool q = B(1); return V::mk_bool(!p || q); }
  if (f == "=" || f == "==" || f == "eq" || f == "!=" || f == "ne") {
    arity(2);
    if (a[0].tag != a[1].tag) throw Bad("mixed compare");
    bool eq = a[0] == a[1];
    return V::mk_bool((f == "!=" || f == "ne") ? !eq : eq);
  }
  if (f == "<" || f == "lt") { arity(2); return V::mk_bool(I(0) < I(1)); }
  if (f == "<=" || f == "le") { arity(2); return V::mk_bool(I(0) <= I(1)); }
  if (f == ">" || f == "gt") { arity(2); return V::mk_bool(I(0) > I(1)); }
  if (f == ">=" || f == "ge") { arity(2); return V::mk_bool(I(0) >= I(1)); }
  if (f == "+" || f == "-" || f == "*" || f == "add" || f == "sub" || f == "mul") {
    arity(2);
    std::int64_t p = I(0), q = I(1), r = 0;
    bool of = (f == "+" || f == "add")   ? __builtin_add_overflow(p, q, &r)
              : (f == "-" || f == "sub") ? __builtin_sub_overflow(p, q, &r)
                                         : __builtin_mul_overflow(p, q, &r);
    if (of) throw Bad("overflow");
    return V::mk_int(r);
  }
  if (f == "len") { arity(1); return V::mk_int(static_cast<std::int64_t>(L(0).size())); }
  if (f == "count") {
    arity(2);
    std::int64_t c = 0;
    for (const auto& e : L(0)) c += (e == a[1]) ? 1 : 0;
    return V::mk_int(c);
  }
  if (f == "member") {
    arity(2);
    for (const auto& e : L(1)) {
      if (e == a[0]) return V::mk_bool(true);
    }
    return V::mk_bool(false);
  }
  if (f == "nth") {
    arity(2);
    const auto& xs = L(0);
    std::int64_t k = I(1);
    if (k < 0 || k >= static_cast<std::int64_t>(xs.size())) throw Bad("range");
    return xs[static_cast<std::size_t>(k)];
  }
  throw Bad("unknown " + f);
}

/// Truth of a clause under `scope`; nullopt on any evaluation error. An
/// empty clause is true.
inline std::optional<bool> holds(const std::string& clause, Scope scope) {
  bool blank = true;
  for (char c : clause) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) return true;
  try {
    V v = run(read_all(clause), scope);
    if (v.tag != V::B) return std::nullopt;
    return v.b;
  } catch (const Bad&) {
    return std::nullopt;
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

enum class Kind { kPositive, kNegInput, kNegOutput };

/// Expected classification of one test: true = the candidate passes it. Any
/// evaluation error makes the check proposition unprovable, hence a fail.
inline bool expected_pass(const std::string& pre, const std::string& post, Kind kind,
                          const Scope& inputs, const std::optional<V>& output) {
  Scope with_y = inputs;
  if (output) with_y.emplace_back("y", *output);
  auto p = holds(pre, kind == Kind::kNegInput ? inputs : with_y);
  switch (kind) {
    case Kind::kPositive: {
      auto q = holds(post, with_y);
      return p && q && *p && *q;
    }
    case Kind::kNegInput:
      return p && !*p;
    case Kind::kNegOutput: {
      auto q = holds(post, with_y);
      return p && q && *p && !*q;
    }
  }
  return false;
}

}  // namespace ref

#endif  // TRACESPEC_TESTS_REF_EVAL_HPP_
