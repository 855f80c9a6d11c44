#include "invh/instrument.hpp"

#include <map>

#include "invh/error.hpp"

namespace invh {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

void check_vars(const Expr& e, std::size_t var_count) {
  if (e.kind == ExprKind::Var && e.var >= var_count) {
    throw ScopeError("undeclared variable '" + e.name + "'");
  }
  for (const auto& a : e.args) check_vars(a, var_count);
}

using Insertions = std::map<std::string, std::vector<Stmt>, std::less<>>;

Block instrument(const Block& b, const Insertions& ins) {
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) {
    const std::vector<Stmt>* extra = nullptr;
    if (s.label) {
      if (auto it = ins.find(*s.label); it != ins.end()) extra = &it->second;
    }
    if (extra) {
      for (Stmt e : *extra) {
        e.line = s.line;
        out.push_back(std::move(e));
      }
    }
    Stmt copy = s;
    copy.body = instrument(s.body, ins);
    copy.else_body = instrument(s.else_body, ins);
    if (extra && s.kind == Stmt::Kind::While) {
      for (Stmt e : *extra) {
        e.line = s.line;
        copy.body.push_back(std::move(e));
      }
    }
    out.push_back(std::move(copy));
  }
  return out;
}

Stmt guard_stmt(Stmt::Kind kind, const Predicate& q) {
  Stmt s;
  s.kind = kind;
  s.expr = q.expr;
  return s;
}

}  // namespace

void scope_check(const Program& p, const Property& prop) {
  if (!p.find_label(prop.location)) {
    throw ScopeError("unknown label '" + prop.location + "'");
  }
  check_vars(prop.predicate.expr, p.var_count());
}

Property make_property(std::string_view pred, std::string_view label, const Program& p) {
  Property prop{parse_predicate(pred, p), std::string(trim(label))};
  scope_check(p, prop);
  return prop;
}

Property parse_property(std::string_view spec, const Program& p) {
  const auto at = spec.rfind('@');
  if (at == std::string_view::npos) {
    throw SyntaxError(1, static_cast<int>(spec.size()) + 1,
                      "expected PRED@LABEL, found '" + std::string(spec) + "'");
  }
  return make_property(spec.substr(0, at), spec.substr(at + 1), p);
}

Program insert_assumes(const Program& p, std::span<const Property> assumptions) {
  if (assumptions.empty()) return p;
  Insertions ins;
  for (const auto& a : assumptions) {
    scope_check(p, a);
    ins[a.location].push_back(guard_stmt(Stmt::Kind::Assume, a.predicate));
  }
  return Program::make(p.decls(), instrument(p.body(), ins));
}

CheckSpec make_check(const Program& p, const Property& prop) {
  scope_check(p, prop);
  return CheckSpec{prop.location, *p.find_label(prop.location), prop.predicate};
}

std::string export_with_check(const Program& p, std::span<const Property> assumptions,
                              const Property& check) {
  scope_check(p, check);
  Insertions ins;
  for (const auto& a : assumptions) {
    scope_check(p, a);
    ins[a.location].push_back(guard_stmt(Stmt::Kind::Assume, a.predicate));
  }
  ins[check.location].push_back(guard_stmt(Stmt::Kind::Assert, check.predicate));
  return pretty_print(Program::make(p.decls(), instrument(p.body(), ins)));
}

}  // namespace invh
