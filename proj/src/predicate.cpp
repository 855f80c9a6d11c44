#include "invh/predicate.hpp"

#include <array>

#include "invh/error.hpp"
#include "lexer.hpp"
#include "parser.hpp"

namespace invh {

Predicate parse_predicate(std::string_view text, const Program& p) {
  detail::Parser parser(detail::tokenize(text));
  for (std::size_t i = 0; i < p.decls().size(); ++i) {
    parser.scope().emplace(p.decls()[i].name, static_cast<VarId>(i));
  }
  Predicate q{parser.parse_bool()};
  parser.expect_end();
  return q;
}

std::optional<Rejection> validate_pure(std::string_view text) {
  std::vector<detail::Token> toks;
  try {
    toks = detail::tokenize(text);
  } catch (const SyntaxError& e) {
    return Rejection{"<lexical>", e.what()};
  }
  static constexpr std::array<std::string_view, 8> kMutating = {
      "=", "+=", "-=", "*=", "/=", "%=", "++", "--"};
  static constexpr std::array<std::string_view, 8> kStatementWords = {
      "int", "if", "else", "while", "assert", "assume", "skip", "nondet"};
  for (const auto& t : toks) {
    if (t.kind == detail::Token::Kind::Punct) {
      for (auto m : kMutating) {
        if (t.text == m) {
          return Rejection{t.text, "mutating expression: '" + t.text + "' updates program state"};
        }
      }
      if (t.text == ";" || t.text == "{" || t.text == "}") {
        return Rejection{t.text, "statement syntax is not a predicate"};
      }
    }
    if (t.kind == detail::Token::Kind::Ident) {
      for (auto w : kStatementWords) {
        if (t.text == w) {
          return Rejection{t.text, "'" + t.text + "' is not part of a state predicate"};
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

std::optional<Rejection> check_node(const Expr& e, bool want_bool) {
  if (is_boolean(e.kind) != want_bool) {
    return Rejection{std::string(spelling(e.kind)),
                     want_bool ? "integer expression where a condition is expected"
                               : "condition where an integer expression is expected"};
  }
  switch (e.kind) {
    case ExprKind::Const:
    case ExprKind::Var:
    case ExprKind::BoolConst:
      return std::nullopt;
    case ExprKind::Neg:
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Mod:
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge:
      for (const auto& a : e.args) {
        if (auto r = check_node(a, false)) return r;
      }
      return std::nullopt;
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Not:
      for (const auto& a : e.args) {
        if (auto r = check_node(a, true)) return r;
      }
      return std::nullopt;
  }
  return Rejection{"?", "unknown expression node"};
}

}  // namespace

std::optional<Rejection> validate_pure(const Predicate& q) { return check_node(q.expr, true); }

std::optional<Value> eval_int(const Expr& e, std::span<const Value> s, Width w) {
  switch (e.kind) {
    case ExprKind::Const:
      return w.wrap(e.value);
    case ExprKind::Var:
      return s[e.var];
    case ExprKind::Neg: {
      auto a = eval_int(e.args[0], s, w);
      if (!a) return std::nullopt;
      return w.wrap(-std::int64_t{*a});
    }
    default:
      break;
  }
  auto a = eval_int(e.args[0], s, w);
  if (!a) return std::nullopt;
  auto b = eval_int(e.args[1], s, w);
  if (!b) return std::nullopt;
  const std::int64_t x = *a;
  const std::int64_t y = *b;
  switch (e.kind) {
    case ExprKind::Add: return w.wrap(x + y);
    case ExprKind::Sub: return w.wrap(x - y);
    case ExprKind::Mul: return w.wrap(x * y);
    case ExprKind::Div:
      if (y == 0) return std::nullopt;
      return static_cast<Value>(x / y);
    case ExprKind::Mod:
      if (y == 0) return std::nullopt;
      return static_cast<Value>(x % y);
    default:
      return std::nullopt;
  }
}

std::optional<bool> eval_bool(const Expr& e, std::span<const Value> s, Width w) {
  switch (e.kind) {
    case ExprKind::BoolConst:
      return e.value != 0;
    case ExprKind::Not: {
      auto a = eval_bool(e.args[0], s, w);
      if (!a) return std::nullopt;
      return !*a;
    }
    case ExprKind::And: {
      auto a = eval_bool(e.args[0], s, w);
      if (!a || !*a) return a;
      return eval_bool(e.args[1], s, w);
    }
    case ExprKind::Or: {
      auto a = eval_bool(e.args[0], s, w);
      if (!a || *a) return a;
      return eval_bool(e.args[1], s, w);
    }
    default:
      break;
  }
  auto a = eval_int(e.args[0], s, w);
  if (!a) return std::nullopt;
  auto b = eval_int(e.args[1], s, w);
  if (!b) return std::nullopt;
  switch (e.kind) {
    case ExprKind::Eq: return *a == *b;
    case ExprKind::Ne: return *a != *b;
    case ExprKind::Lt: return *a < *b;
    case ExprKind::Le: return *a <= *b;
    case ExprKind::Gt: return *a > *b;
    case ExprKind::Ge: return *a >= *b;
    default: return std::nullopt;
  }
}

}  // namespace invh
