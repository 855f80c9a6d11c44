#include "invh/intervals.hpp"

namespace invh {

Interval join(Interval a, Interval b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval meet(Interval a, Interval b) {
  if (a.empty() || b.empty()) return Interval::empty_set();
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  return r.empty() ? Interval::empty_set() : r;
}

Interval widen(Interval old, Interval next, Width w) {
  if (old.empty()) return next;
  if (next.empty()) return old;
  return {next.lo < old.lo ? 0 : old.lo, next.hi > old.hi ? std::int64_t{w.max_value()} : old.hi};
}

Interval add(Interval a, Interval b, Width w) {
  if (a.empty() || b.empty()) return Interval::empty_set();
  const std::int64_t m = w.modulus();
  const std::int64_t lo = a.lo + b.lo;
  const std::int64_t hi = a.hi + b.hi;
  if (hi < m) return {lo, hi};
  if (lo >= m) return {lo - m, hi - m};
  return Interval::top(w);
}

Interval sub(Interval a, Interval b, Width w) {
  if (a.empty() || b.empty()) return Interval::empty_set();
  const std::int64_t m = w.modulus();
  const std::int64_t lo = a.lo - b.hi;
  const std::int64_t hi = a.hi - b.lo;
  if (lo >= 0) return {lo, hi};
  if (hi < 0) return {lo + m, hi + m};
  return Interval::top(w);
}

Interval mul(Interval a, Interval b, Width w) {
  if (a.empty() || b.empty()) return Interval::empty_set();
  if (a.hi * b.hi < w.modulus()) return {a.lo * b.lo, a.hi * b.hi};
  return Interval::top(w);
}

Interval div(Interval a, Interval b, Width) {
  if (a.empty() || b.empty() || b.hi == 0) return Interval::empty_set();
  const std::int64_t dlo = std::max<std::int64_t>(b.lo, 1);
  return {a.lo / b.hi, a.hi / dlo};
}

Interval mod(Interval a, Interval b, Width) {
  if (a.empty() || b.empty() || b.hi == 0) return Interval::empty_set();
  const std::int64_t dlo = std::max<std::int64_t>(b.lo, 1);
  if (a.hi < dlo) return a;
  if (dlo == b.hi && a.lo / dlo == a.hi / dlo) return {a.lo % dlo, a.hi % dlo};
  return {0, std::min(a.hi, b.hi - 1)};
}

Box Box::make_point(const State& s) {
  Box b{std::vector<Interval>(s.size()), false};
  for (std::size_t i = 0; i < s.size(); ++i) b.vars[i] = Interval::point(s[i]);
  return b;
}

Box join(const Box& a, const Box& b) {
  if (a.bottom) return b;
  if (b.bottom) return a;
  Box r = a;
  for (std::size_t i = 0; i < r.vars.size(); ++i) r.vars[i] = join(a.vars[i], b.vars[i]);
  return r;
}

Box meet(const Box& a, const Box& b) {
  if (a.bottom) return a;
  if (b.bottom) return b;
  Box r = a;
  for (std::size_t i = 0; i < r.vars.size(); ++i) {
    r.vars[i] = meet(a.vars[i], b.vars[i]);
    if (r.vars[i].empty()) return Box::make_bottom(a.vars.size());
  }
  return r;
}

Box widen(const Box& old, const Box& next, Width w) {
  if (old.bottom) return next;
  if (next.bottom) return old;
  Box r = old;
  for (std::size_t i = 0; i < r.vars.size(); ++i) r.vars[i] = widen(old.vars[i], next.vars[i], w);
  return r;
}

bool leq(const Box& a, const Box& b) {
  if (a.bottom) return true;
  if (b.bottom) return false;
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    if (a.vars[i].lo < b.vars[i].lo || a.vars[i].hi > b.vars[i].hi) return false;
  }
  return true;
}

Interval eval_interval(const Expr& e, const Box& box, Width w) {
  if (box.bottom) return Interval::empty_set();
  switch (e.kind) {
    case ExprKind::Const:
      return Interval::point(w.wrap(e.value));
    case ExprKind::Var:
      return box.vars[e.var];
    case ExprKind::Neg:
      return sub(Interval::point(0), eval_interval(e.args[0], box, w), w);
    case ExprKind::Add:
      return add(eval_interval(e.args[0], box, w), eval_interval(e.args[1], box, w), w);
    case ExprKind::Sub:
      return sub(eval_interval(e.args[0], box, w), eval_interval(e.args[1], box, w), w);
    case ExprKind::Mul:
      return mul(eval_interval(e.args[0], box, w), eval_interval(e.args[1], box, w), w);
    case ExprKind::Div:
      return div(eval_interval(e.args[0], box, w), eval_interval(e.args[1], box, w), w);
    case ExprKind::Mod:
      return mod(eval_interval(e.args[0], box, w), eval_interval(e.args[1], box, w), w);
    default:
      return Interval::top(w);
  }
}

bool may_fault(const Expr& e, const Box& box, Width w) {
  if (box.bottom) return false;
  switch (e.kind) {
    case ExprKind::Const:
    case ExprKind::Var:
    case ExprKind::BoolConst:
      return false;
    case ExprKind::Div:
    case ExprKind::Mod:
      return may_fault(e.args[0], box, w) || may_fault(e.args[1], box, w) ||
             eval_interval(e.args[1], box, w).contains(0);
    case ExprKind::And:
      return may_fault(e.args[0], box, w) ||
             may_fault(e.args[1], refine(box, e.args[0], true, w), w);
    case ExprKind::Or:
      return may_fault(e.args[0], box, w) ||
             may_fault(e.args[1], refine(box, e.args[0], false, w), w);
    default:
      for (const auto& a : e.args) {
        if (may_fault(a, box, w)) return true;
      }
      return false;
  }
}

namespace {

ExprKind negate(ExprKind k) {
  switch (k) {
    case ExprKind::Eq: return ExprKind::Ne;
    case ExprKind::Ne: return ExprKind::Eq;
    case ExprKind::Lt: return ExprKind::Ge;
    case ExprKind::Le: return ExprKind::Gt;
    case ExprKind::Gt: return ExprKind::Le;
    case ExprKind::Ge: return ExprKind::Lt;
    default: return k;
  }
}

// Operator seen from the right-hand operand: a < b  <=>  b > a.
ExprKind mirror(ExprKind k) {
  switch (k) {
    case ExprKind::Lt: return ExprKind::Gt;
    case ExprKind::Le: return ExprKind::Ge;
    case ExprKind::Gt: return ExprKind::Lt;
    case ExprKind::Ge: return ExprKind::Le;
    default: return k;
  }
}

bool feasible(ExprKind op, Interval l, Interval r) {
  switch (op) {
    case ExprKind::Eq: return !meet(l, r).empty();
    case ExprKind::Ne: return !(l.singleton() && r.singleton() && l.lo == r.lo);
    case ExprKind::Lt: return l.lo < r.hi;
    case ExprKind::Le: return l.lo <= r.hi;
    case ExprKind::Gt: return l.hi > r.lo;
    case ExprKind::Ge: return l.hi >= r.lo;
    default: return true;
  }
}

// Narrows `v` so that `v op other` is possible.
Interval constrain(Interval v, ExprKind op, Interval other) {
  switch (op) {
    case ExprKind::Eq: return meet(v, other);
    case ExprKind::Ne:
      if (other.singleton()) {
        if (v.lo == other.lo) ++v.lo;
        if (!v.empty() && v.hi == other.lo) --v.hi;
      }
      return v.empty() ? Interval::empty_set() : v;
    case ExprKind::Lt: return meet(v, {0, other.hi - 1});
    case ExprKind::Le: return meet(v, {0, other.hi});
    case ExprKind::Gt: return meet(v, {other.lo + 1, INT64_MAX});
    case ExprKind::Ge: return meet(v, {other.lo, INT64_MAX});
    default: return v;
  }
}

}  // namespace

Box refine(const Box& box, const Expr& cond, bool truth, Width w) {
  if (box.bottom) return box;
  const std::size_t n = box.vars.size();
  switch (cond.kind) {
    case ExprKind::BoolConst:
      return (cond.value != 0) == truth ? box : Box::make_bottom(n);
    case ExprKind::Not:
      return refine(box, cond.args[0], !truth, w);
    case ExprKind::And:
      if (truth) return refine(refine(box, cond.args[0], true, w), cond.args[1], true, w);
      return join(refine(box, cond.args[0], false, w),
                  refine(refine(box, cond.args[0], true, w), cond.args[1], false, w));
    case ExprKind::Or:
      if (!truth) return refine(refine(box, cond.args[0], false, w), cond.args[1], false, w);
      return join(refine(box, cond.args[0], true, w),
                  refine(refine(box, cond.args[0], false, w), cond.args[1], true, w));
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: {
      const ExprKind op = truth ? cond.kind : negate(cond.kind);
      const Expr& lhs = cond.args[0];
      const Expr& rhs = cond.args[1];
      const Interval l = eval_interval(lhs, box, w);
      const Interval r = eval_interval(rhs, box, w);
      if (l.empty() || r.empty() || !feasible(op, l, r)) return Box::make_bottom(n);
      Box out = box;
      if (lhs.kind == ExprKind::Var) {
        out.vars[lhs.var] = constrain(out.vars[lhs.var], op, r);
        if (out.vars[lhs.var].empty()) return Box::make_bottom(n);
      }
      if (rhs.kind == ExprKind::Var) {
        out.vars[rhs.var] = constrain(out.vars[rhs.var], mirror(op), l);
        if (out.vars[rhs.var].empty()) return Box::make_bottom(n);
      }
      return out;
    }
    default:
      return box;
  }
}

bool entails(const Box& box, const Expr& cond, Width w) {
  if (box.bottom) return true;
  if (may_fault(cond, box, w)) return false;
  return refine(box, cond, false, w).bottom;
}

}  // namespace invh
