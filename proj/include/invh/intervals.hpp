#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "invh/lang.hpp"
#include "invh/value.hpp"

namespace invh {

/// Closed interval of unsigned W-bit values; empty when lo > hi.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  static Interval point(std::int64_t v) { return {v, v}; }
  static Interval top(Width w) { return {0, w.max_value()}; }
  static Interval empty_set() { return {}; }

  bool empty() const { return lo > hi; }
  bool contains(std::int64_t v) const { return lo <= v && v <= hi; }
  bool singleton() const { return lo == hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

Interval join(Interval a, Interval b);
Interval meet(Interval a, Interval b);
/// Bounds that grew jump to the domain limits.
Interval widen(Interval old, Interval next, Width w);

Interval add(Interval a, Interval b, Width w);
Interval sub(Interval a, Interval b, Width w);
Interval mul(Interval a, Interval b, Width w);
/// Quotient over the non-faulting divisors; empty if the divisor is {0}.
Interval div(Interval a, Interval b, Width w);
Interval mod(Interval a, Interval b, Width w);

/// One interval per variable, or bottom (no reachable state).
struct Box {
  std::vector<Interval> vars;
  bool bottom = true;

  static Box make_bottom(std::size_t n) { return Box{std::vector<Interval>(n), true}; }
  static Box make_top(std::size_t n, Width w) {
    return Box{std::vector<Interval>(n, Interval::top(w)), false};
  }
  static Box make_point(const State& s);

  friend bool operator==(const Box&, const Box&) = default;
};

Box join(const Box& a, const Box& b);
Box meet(const Box& a, const Box& b);
Box widen(const Box& old, const Box& next, Width w);
bool leq(const Box& a, const Box& b);

/// Value range of an integer expression over its non-faulting evaluations.
Interval eval_interval(const Expr& e, const Box& box, Width w);
/// Whether evaluating `e` (integer or boolean) may divide by zero.
bool may_fault(const Expr& e, const Box& box, Width w);
/// Over-approximates the states of `box` on which `cond` evaluates to
/// `truth` without fault. Refines variables compared against any
/// expression; other shapes only detect infeasibility.
Box refine(const Box& box, const Expr& cond, bool truth, Width w);
/// True when every state in `box` satisfies `cond` without fault.
bool entails(const Box& box, const Expr& cond, Width w);

}  // namespace invh
