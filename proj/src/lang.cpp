#include "invh/lang.hpp"

#include <functional>

#include "invh/error.hpp"
#include "lexer.hpp"
#include "parser.hpp"

namespace invh {

bool is_boolean(ExprKind kind) {
  switch (kind) {
    case ExprKind::BoolConst:
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge:
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Not:
      return true;
    default:
      return false;
  }
}

std::string_view spelling(ExprKind kind) {
  switch (kind) {
    case ExprKind::Neg: return "-";
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    case ExprKind::Mod: return "%";
    case ExprKind::Eq: return "==";
    case ExprKind::Ne: return "!=";
    case ExprKind::Lt: return "<";
    case ExprKind::Le: return "<=";
    case ExprKind::Gt: return ">";
    case ExprKind::Ge: return ">=";
    case ExprKind::And: return "&&";
    case ExprKind::Or: return "||";
    case ExprKind::Not: return "!";
    default: return "";
  }
}

Expr Expr::constant(std::int64_t v) {
  Expr e;
  e.kind = ExprKind::Const;
  e.value = v;
  return e;
}

Expr Expr::boolean(bool b) {
  Expr e;
  e.kind = ExprKind::BoolConst;
  e.value = b ? 1 : 0;
  return e;
}

Expr Expr::variable(VarId id, std::string name) {
  Expr e;
  e.kind = ExprKind::Var;
  e.var = id;
  e.name = std::move(name);
  return e;
}

Expr Expr::unary(ExprKind kind, Expr operand) {
  Expr e;
  e.kind = kind;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(ExprKind kind, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = kind;
  e.args.reserve(2);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.label != b.label) return false;
  switch (a.kind) {
    case Stmt::Kind::Assign:
      return a.target == b.target && a.expr == b.expr;
    case Stmt::Kind::Nondet:
      return a.target == b.target;
    case Stmt::Kind::If:
      return a.expr == b.expr && a.body == b.body && a.else_body == b.else_body;
    case Stmt::Kind::While:
      return a.expr == b.expr && a.body == b.body;
    case Stmt::Kind::Assert:
    case Stmt::Kind::Assume:
      return a.expr == b.expr;
    case Stmt::Kind::Skip:
      return true;
  }
  return false;
}

namespace {

void check_expr_scope(const Expr& e, std::size_t var_count) {
  if (e.kind == ExprKind::Var && e.var >= var_count) {
    throw ScopeError("undeclared variable '" + e.name + "'");
  }
  for (const auto& a : e.args) check_expr_scope(a, var_count);
}

std::uint32_t subtree_size(const Stmt& s) {
  std::uint32_t n = 1;
  for (const auto& c : s.body) n += subtree_size(c);
  for (const auto& c : s.else_body) n += subtree_size(c);
  return n;
}

class CfgBuilder {
 public:
  CfgBuilder(std::vector<Node>& nodes, std::size_t var_count,
             std::map<std::string, Position, std::less<>>& labels,
             std::vector<std::string>& order)
      : nodes_(nodes), var_count_(var_count), labels_(labels), order_(order) {}

  // Nodes are numbered in source pre-order; `first` is the index of b[0].
  void build(const Block& b, std::uint32_t first, Position follow) {
    std::uint32_t idx = first;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Stmt& s = b[i];
      const std::uint32_t size = subtree_size(s);
      const Position next = i + 1 < b.size() ? Position{idx + size} : follow;
      emit(s, idx, next);
      idx += size;
    }
  }

 private:
  void emit(const Stmt& s, std::uint32_t idx, Position next) {
    if (nodes_.size() <= idx) nodes_.resize(idx + 1);
    Node n;
    n.label = s.label;
    n.line = s.line;
    n.expr = s.expr;
    n.next = next;
    check_expr_scope(s.expr, var_count_);

    if (s.label) {
      if (labels_.contains(*s.label)) {
        throw ScopeError("line " + std::to_string(s.line) + ": duplicate label '" +
                         *s.label + "'");
      }
      labels_.emplace(*s.label, Position{idx});
      order_.push_back(*s.label);
    }

    switch (s.kind) {
      case Stmt::Kind::Assign:
      case Stmt::Kind::Nondet:
        if (s.target >= var_count_) {
          throw ScopeError("undeclared variable '" + s.target_name + "'");
        }
        n.kind = s.kind == Stmt::Kind::Assign ? Node::Kind::Assign : Node::Kind::Nondet;
        n.var = s.target;
        break;
      case Stmt::Kind::Assert:
        n.kind = Node::Kind::Assert;
        break;
      case Stmt::Kind::Assume:
        n.kind = Node::Kind::Assume;
        break;
      case Stmt::Kind::Skip:
        n.kind = Node::Kind::Skip;
        break;
      case Stmt::Kind::While: {
        n.kind = Node::Kind::Branch;
        n.loop_head = true;
        const Position self{idx};
        n.next = s.body.empty() ? self : Position{idx + 1};
        n.alt = next;
        nodes_[idx] = n;
        build(s.body, idx + 1, self);
        return;
      }
      case Stmt::Kind::If: {
        n.kind = Node::Kind::Branch;
        const std::uint32_t then_first = idx + 1;
        std::uint32_t then_size = 0;
        for (const auto& c : s.body) then_size += subtree_size(c);
        const std::uint32_t else_first = then_first + then_size;
        n.next = s.body.empty() ? next : Position{then_first};
        n.alt = s.else_body.empty() ? next : Position{else_first};
        nodes_[idx] = n;
        build(s.body, then_first, next);
        build(s.else_body, else_first, next);
        return;
      }
    }
    nodes_[idx] = n;
  }

  std::vector<Node>& nodes_;
  std::size_t var_count_;
  std::map<std::string, Position, std::less<>>& labels_;
  std::vector<std::string>& order_;
};

const Stmt* find_stmt(const Block& b, std::string_view label) {
  for (const auto& s : b) {
    if (s.label && *s.label == label) return &s;
    if (const Stmt* r = find_stmt(s.body, label)) return r;
    if (const Stmt* r = find_stmt(s.else_body, label)) return r;
  }
  return nullptr;
}

}  // namespace

Program Program::make(std::vector<Decl> decls, Block body) {
  auto data = std::make_shared<Data>();
  std::map<std::string, int, std::less<>> seen;
  for (const auto& d : decls) {
    if (!seen.emplace(d.name, 0).second) {
      throw ScopeError("duplicate declaration of '" + d.name + "'");
    }
  }
  data->decls = std::move(decls);
  data->body = std::move(body);

  std::uint32_t total = 0;
  for (const auto& s : data->body) total += subtree_size(s);
  data->nodes.resize(total);
  CfgBuilder builder(data->nodes, data->decls.size(), data->labels, data->label_order);
  builder.build(data->body, 0, Position{total});
  data->entry = Position{0};
  return Program(std::move(data));
}

std::optional<VarId> Program::find_var(std::string_view name) const {
  for (std::size_t i = 0; i < data_->decls.size(); ++i) {
    if (data_->decls[i].name == name) return static_cast<VarId>(i);
  }
  return std::nullopt;
}

std::optional<Position> Program::find_label(std::string_view name) const {
  auto it = data_->labels.find(name);
  if (it == data_->labels.end()) return std::nullopt;
  return it->second;
}

const Stmt* Program::find_labeled_stmt(std::string_view name) const {
  return find_stmt(data_->body, name);
}

Program parse_program(std::string_view text) {
  detail::Parser parser(detail::tokenize(text));
  auto decls = parser.parse_decls();
  auto body = parser.parse_statements_until_end();
  return Program::make(std::move(decls), std::move(body));
}

std::vector<std::string> locations_of(const Program& p) { return p.label_order(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Not: return 3;
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: return 4;
    case ExprKind::Add:
    case ExprKind::Sub: return 5;
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Mod: return 6;
    case ExprKind::Neg: return 7;
    default: return 8;
  }
}

void print_into(std::string& out, const Expr& e, int parent_prec, bool right_operand) {
  const int prec = precedence(e.kind);
  switch (e.kind) {
    case ExprKind::Const:
      if (e.value < 0) {
        out += "(-" + std::to_string(-e.value) + ")";
      } else {
        out += std::to_string(e.value);
      }
      return;
    case ExprKind::Var:
      out += e.name;
      return;
    case ExprKind::BoolConst:
      out += e.value ? "true" : "false";
      return;
    case ExprKind::Neg:
    case ExprKind::Not: {
      out += spelling(e.kind);
      const Expr& a = e.args[0];
      const bool atom = a.kind == ExprKind::Const || a.kind == ExprKind::Var ||
                        a.kind == ExprKind::BoolConst ||
                        (e.kind == ExprKind::Not && a.kind == ExprKind::Not);
      if (atom && !(a.kind == ExprKind::Const && a.value < 0)) {
        print_into(out, a, 0, false);
      } else {
        out += "(";
        print_into(out, a, 0, false);
        out += ")";
      }
      return;
    }
    default: {
      const bool wrap = prec < parent_prec || (prec == parent_prec && right_operand);
      if (wrap) out += "(";
      print_into(out, e.args[0], prec, false);
      out += " ";
      out += spelling(e.kind);
      out += " ";
      print_into(out, e.args[1], prec, true);
      if (wrap) out += ")";
      return;
    }
  }
}

void print_stmt(std::string& out, const Stmt& s, int indent);

void print_block_into(std::string& out, const Block& b, int indent) {
  for (const auto& s : b) print_stmt(out, s, indent);
}

void print_stmt(std::string& out, const Stmt& s, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out += pad;
  if (s.label) out += "@" + *s.label + ": ";
  switch (s.kind) {
    case Stmt::Kind::Assign:
      out += s.target_name + " = " + print_expr(s.expr) + ";\n";
      break;
    case Stmt::Kind::Nondet:
      out += s.target_name + " = nondet();\n";
      break;
    case Stmt::Kind::Assert:
      out += "assert(" + print_expr(s.expr) + ");\n";
      break;
    case Stmt::Kind::Assume:
      out += "assume(" + print_expr(s.expr) + ");\n";
      break;
    case Stmt::Kind::Skip:
      out += "skip;\n";
      break;
    case Stmt::Kind::While:
      out += "while (" + print_expr(s.expr) + ") {\n";
      print_block_into(out, s.body, indent + 1);
      out += pad + "}\n";
      break;
    case Stmt::Kind::If:
      out += "if (" + print_expr(s.expr) + ") {\n";
      print_block_into(out, s.body, indent + 1);
      out += pad + "}";
      if (!s.else_body.empty()) {
        out += " else {\n";
        print_block_into(out, s.else_body, indent + 1);
        out += pad + "}";
      }
      out += "\n";
      break;
  }
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(out, e, 0, false);
  return out;
}

std::string print_block(const Block& b, int indent) {
  std::string out;
  print_block_into(out, b, indent);
  return out;
}

std::string pretty_print(const Program& p) {
  std::string out;
  for (const auto& d : p.decls()) {
    out += "int " + d.name;
    if (d.init) out += " = " + std::to_string(*d.init);
    out += ";\n";
  }
  out += print_block(p.body(), 0);
  return out;
}

}  // namespace invh
