#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "invh/lang.hpp"
#include "invh/value.hpp"

namespace invh {

/// A side-effect-free boolean condition over a program's variables.
struct Predicate {
  Expr expr;

  /// Canonical text; whitespace- and parenthesisation-insensitive.
  std::string text() const { return print_expr(expr); }

  static Predicate always() { return Predicate{Expr::boolean(true)}; }

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Parses `text` as a boolean condition scoped by the variables of `p`.
/// Throws SyntaxError or ScopeError.
Predicate parse_predicate(std::string_view text, const Program& p);

/// Why a candidate predicate was refused.
struct Rejection {
  std::string construct;  // offending token or node, e.g. "+="
  std::string reason;
};

/// Screens raw candidate text for state-mutating or non-predicate
/// constructs (assignments, increments, nondet, statements).
std::optional<Rejection> validate_pure(std::string_view text);

/// AST-level purity check: only constants, variables, arithmetic,
/// comparisons and connectives, with a boolean root.
std::optional<Rejection> validate_pure(const Predicate& q);

/// Integer value of `e`, or nullopt on division/modulo by zero.
std::optional<Value> eval_int(const Expr& e, std::span<const Value> state, Width w);

/// Truth value of `e`, or nullopt on an evaluation fault. `&&` and `||`
/// short-circuit, so a fault in an unevaluated operand is not a fault.
std::optional<bool> eval_bool(const Expr& e, std::span<const Value> state, Width w);

inline std::optional<bool> eval_predicate(const Predicate& q, const State& s, Width w) {
  return eval_bool(q.expr, s, w);
}

}  // namespace invh
