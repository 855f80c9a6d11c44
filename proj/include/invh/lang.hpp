#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invh/value.hpp"

namespace invh {

using VarId = std::uint32_t;

enum class ExprKind : std::uint8_t {
  // integer-valued
  Const,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  // boolean-valued
  BoolConst,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
};

bool is_boolean(ExprKind kind);
std::string_view spelling(ExprKind kind);

/// Expression tree shared by program statements and candidate predicates.
/// Integer and boolean sub-languages are kept apart by the parser.
struct Expr {
  ExprKind kind = ExprKind::Const;
  std::int64_t value = 0;  // Const literal, or 0/1 for BoolConst
  VarId var = 0;
  std::string name;  // variable name, for printing
  std::vector<Expr> args;

  static Expr constant(std::int64_t v);
  static Expr boolean(bool b);
  static Expr variable(VarId id, std::string name);
  static Expr unary(ExprKind kind, Expr operand);
  static Expr binary(ExprKind kind, Expr lhs, Expr rhs);

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
  enum class Kind : std::uint8_t { Assign, Nondet, If, While, Assert, Assume, Skip };

  Kind kind = Kind::Skip;
  std::optional<std::string> label;
  VarId target = 0;  // Assign, Nondet
  std::string target_name;
  Expr expr;         // Assign rhs; condition for If/While/Assert/Assume
  Block body;        // If then-branch, While body
  Block else_body;   // If else-branch
  int line = 0;      // source line, not part of structural identity

  friend bool operator==(const Stmt& a, const Stmt& b);
};

struct Decl {
  std::string name;
  std::optional<std::int64_t> init;

  friend bool operator==(const Decl&, const Decl&) = default;
};

/// Index of a node in the compiled control-flow graph.
struct Position {
  std::uint32_t index = 0;
  friend auto operator<=>(const Position&, const Position&) = default;
};

/// Control-flow node. Every statement compiles to exactly one node, which
/// is the node control "arrives at" before executing that statement.
struct Node {
  enum class Kind : std::uint8_t { Assign, Nondet, Branch, Assert, Assume, Skip };

  Kind kind = Node::Kind::Skip;
  VarId var = 0;
  Expr expr;
  Position next;  // successor; for Branch the true-successor
  Position alt;   // Branch false-successor
  std::optional<std::string> label;
  int line = 0;
  bool loop_head = false;
};

/// A parsed, scope-checked MiniWhile program. Immutable; copies share state.
class Program {
 public:
  /// Validates declarations, scopes and labels, then compiles the CFG.
  /// Throws ScopeError on violations.
  static Program make(std::vector<Decl> decls, Block body);

  const std::vector<Decl>& decls() const { return data_->decls; }
  const Block& body() const { return data_->body; }
  std::size_t var_count() const { return data_->decls.size(); }
  std::optional<VarId> find_var(std::string_view name) const;

  /// Label name to the node arriving at the labeled statement.
  const std::map<std::string, Position, std::less<>>& labels() const {
    return data_->labels;
  }
  /// Labels in source order.
  const std::vector<std::string>& label_order() const { return data_->label_order; }
  std::optional<Position> find_label(std::string_view name) const;
  /// The labeled statement, or nullptr.
  const Stmt* find_labeled_stmt(std::string_view name) const;

  const std::vector<Node>& nodes() const { return data_->nodes; }
  const Node& node(Position p) const { return data_->nodes[p.index]; }
  Position entry() const { return data_->entry; }
  /// The distinguished position reached after the last statement.
  Position exit() const { return Position{static_cast<std::uint32_t>(data_->nodes.size())}; }

  friend bool operator==(const Program& a, const Program& b) {
    return a.decls() == b.decls() && a.body() == b.body();
  }

 private:
  struct Data {
    std::vector<Decl> decls;
    Block body;
    std::map<std::string, Position, std::less<>> labels;
    std::vector<std::string> label_order;
    std::vector<Node> nodes;
    Position entry;
  };
  explicit Program(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

/// Parses MiniWhile source. Throws SyntaxError (with line/column) or
/// ScopeError (undeclared variable, duplicate label or declaration).
Program parse_program(std::string_view text);

/// Canonical source text; parse_program(pretty_print(p)) == p.
std::string pretty_print(const Program& p);
std::string print_expr(const Expr& e);
std::string print_block(const Block& b, int indent = 0);

/// All labels of `p` in source order.
std::vector<std::string> locations_of(const Program& p);

}  // namespace invh
