#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "invh/lang.hpp"
#include "lexer.hpp"

namespace invh::detail {

/// Recursive-descent parser over a token stream. Variables resolve through
/// `scope`, which the program parser fills from declarations and the
/// predicate parser copies from an existing Program.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::map<std::string, VarId, std::less<>>& scope() { return scope_; }

  std::vector<Decl> parse_decls();
  Block parse_statements_until_end();
  Expr parse_bool();
  Expr parse_arith();

  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  void expect_end();

 private:
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(std::string_view punct);
  void expect(std::string_view punct);
  bool accept_word(std::string_view word);
  std::string expect_ident(const char* what);

  Stmt parse_stmt();
  Block parse_block();
  Expr parse_or();
  Expr parse_and();
  Expr parse_not();
  Expr parse_bool_primary();
  Expr parse_comparison();
  Expr parse_term();
  Expr parse_factor();
  Expr resolve(const Token& ident);

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, VarId, std::less<>> scope_;
};

}  // namespace invh::detail
