#include "parser.hpp"

#include <charconv>

#include "invh/error.hpp"

namespace invh::detail {

void Parser::fail(const Token& at, const std::string& message) const {
  std::string found = at.kind == Token::Kind::End ? "end of input" : "'" + at.text + "'";
  throw SyntaxError(at.line, at.column, message + ", found " + found);
}

bool Parser::accept(std::string_view punct) {
  if (peek().is(punct)) {
    take();
    return true;
  }
  return false;
}

void Parser::expect(std::string_view punct) {
  if (!accept(punct)) fail(peek(), "expected '" + std::string(punct) + "'");
}

bool Parser::accept_word(std::string_view word) {
  if (peek().is_word(word)) {
    take();
    return true;
  }
  return false;
}

std::string Parser::expect_ident(const char* what) {
  const Token& t = peek();
  if (t.kind != Token::Kind::Ident || is_keyword(t.text)) {
    fail(t, std::string("expected ") + what);
  }
  take();
  return t.text;
}

void Parser::expect_end() {
  if (!at_end()) fail(peek(), "expected end of input");
}

std::vector<Decl> Parser::parse_decls() {
  std::vector<Decl> decls;
  while (peek().is_word("int")) {
    take();
    const Token& name_tok = peek();
    Decl d;
    d.name = expect_ident("variable name");
    if (accept("=")) {
      const bool negative = accept("-");
      const Token& lit = peek();
      if (lit.kind != Token::Kind::Int) fail(lit, "expected integer constant");
      take();
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(lit.text.data(), lit.text.data() + lit.text.size(), v);
      if (ec != std::errc{}) fail(lit, "integer constant out of range");
      d.init = negative ? -v : v;
    }
    expect(";");
    if (scope_.contains(d.name)) {
      throw ScopeError(std::to_string(name_tok.line) + ":" + std::to_string(name_tok.column) +
                       ": duplicate declaration of '" + d.name + "'");
    }
    scope_.emplace(d.name, static_cast<VarId>(decls.size()));
    decls.push_back(std::move(d));
  }
  return decls;
}

Block Parser::parse_statements_until_end() {
  Block out;
  while (!at_end()) out.push_back(parse_stmt());
  return out;
}

Block Parser::parse_block() {
  expect("{");
  Block out;
  while (!peek().is("}")) {
    if (at_end()) fail(peek(), "expected '}'");
    out.push_back(parse_stmt());
  }
  expect("}");
  return out;
}

Stmt Parser::parse_stmt() {
  Stmt s;
  s.line = peek().line;
  if (accept("@")) {
    s.label = expect_ident("label name");
    expect(":");
  }

  const Token& t = peek();
  if (t.is_word("if")) {
    take();
    s.kind = Stmt::Kind::If;
    expect("(");
    s.expr = parse_bool();
    expect(")");
    s.body = parse_block();
    if (accept_word("else")) {
      if (peek().is_word("if") || peek().is("@")) {
        s.else_body.push_back(parse_stmt());
      } else {
        s.else_body = parse_block();
      }
    }
    return s;
  }
  if (t.is_word("while")) {
    take();
    s.kind = Stmt::Kind::While;
    expect("(");
    s.expr = parse_bool();
    expect(")");
    s.body = parse_block();
    return s;
  }
  if (t.is_word("assert") || t.is_word("assume")) {
    s.kind = t.is_word("assert") ? Stmt::Kind::Assert : Stmt::Kind::Assume;
    take();
    expect("(");
    s.expr = parse_bool();
    expect(")");
    expect(";");
    return s;
  }
  if (t.is_word("skip")) {
    take();
    s.kind = Stmt::Kind::Skip;
    expect(";");
    return s;
  }
  if (t.is_word("int")) fail(t, "declarations must precede statements");
  if (t.kind == Token::Kind::Ident && !is_keyword(t.text)) {
    const Token target = t;
    take();
    Expr lhs = resolve(target);
    s.target = lhs.var;
    s.target_name = lhs.name;
    if (!accept("=")) fail(peek(), "expected '=' in assignment");
    if (accept_word("nondet")) {
      expect("(");
      expect(")");
      s.kind = Stmt::Kind::Nondet;
    } else {
      s.kind = Stmt::Kind::Assign;
      s.expr = parse_arith();
    }
    expect(";");
    return s;
  }
  fail(t, "expected statement");
}

Expr Parser::parse_bool() { return parse_or(); }

Expr Parser::parse_or() {
  Expr lhs = parse_and();
  while (accept("||")) lhs = Expr::binary(ExprKind::Or, std::move(lhs), parse_and());
  return lhs;
}

Expr Parser::parse_and() {
  Expr lhs = parse_not();
  while (accept("&&")) lhs = Expr::binary(ExprKind::And, std::move(lhs), parse_not());
  return lhs;
}

Expr Parser::parse_not() {
  if (accept("!")) return Expr::unary(ExprKind::Not, parse_not());
  return parse_bool_primary();
}

Expr Parser::parse_bool_primary() {
  if (accept_word("true")) return Expr::boolean(true);
  if (accept_word("false")) return Expr::boolean(false);

  // A leading '(' may open either an arithmetic operand of a comparison or
  // a parenthesised boolean expression; try the comparison first.
  const std::size_t saved = pos_;
  try {
    return parse_comparison();
  } catch (const SyntaxError&) {
    if (!toks_[saved].is("(")) throw;
    pos_ = saved;
  }
  expect("(");
  Expr inner = parse_bool();
  expect(")");
  return inner;
}

Expr Parser::parse_comparison() {
  Expr lhs = parse_arith();
  static const std::pair<std::string_view, ExprKind> kOps[] = {
      {"==", ExprKind::Eq}, {"!=", ExprKind::Ne}, {"<=", ExprKind::Le},
      {">=", ExprKind::Ge}, {"<", ExprKind::Lt},  {">", ExprKind::Gt},
  };
  for (const auto& [text, kind] : kOps) {
    if (accept(text)) return Expr::binary(kind, std::move(lhs), parse_arith());
  }
  fail(peek(), "expected comparison operator");
}

Expr Parser::parse_arith() {
  Expr lhs = parse_term();
  for (;;) {
    if (accept("+")) {
      lhs = Expr::binary(ExprKind::Add, std::move(lhs), parse_term());
    } else if (accept("-")) {
      lhs = Expr::binary(ExprKind::Sub, std::move(lhs), parse_term());
    } else {
      return lhs;
    }
  }
}

Expr Parser::parse_term() {
  Expr lhs = parse_factor();
  for (;;) {
    if (accept("*")) {
      lhs = Expr::binary(ExprKind::Mul, std::move(lhs), parse_factor());
    } else if (accept("/")) {
      lhs = Expr::binary(ExprKind::Div, std::move(lhs), parse_factor());
    } else if (accept("%")) {
      lhs = Expr::binary(ExprKind::Mod, std::move(lhs), parse_factor());
    } else {
      return lhs;
    }
  }
}

Expr Parser::parse_factor() {
  if (accept("-")) return Expr::unary(ExprKind::Neg, parse_factor());
  const Token& t = peek();
  if (t.kind == Token::Kind::Int) {
    take();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) fail(t, "integer constant out of range");
    return Expr::constant(v);
  }
  if (t.kind == Token::Kind::Ident && !is_keyword(t.text)) {
    const Token ident = t;
    take();
    return resolve(ident);
  }
  if (accept("(")) {
    Expr inner = parse_arith();
    expect(")");
    return inner;
  }
  fail(t, "expected arithmetic expression");
}

Expr Parser::resolve(const Token& ident) {
  auto it = scope_.find(ident.text);
  if (it == scope_.end()) {
    throw ScopeError(std::to_string(ident.line) + ":" + std::to_string(ident.column) +
                     ": undeclared variable '" + ident.text + "'");
  }
  return Expr::variable(it->second, ident.text);
}

}  // namespace invh::detail
