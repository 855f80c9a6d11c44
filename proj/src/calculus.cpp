#include "invh/calculus.hpp"

#include <chrono>
#include <set>
#include <thread>

#include "invh/error.hpp"
#include "invh/workers.hpp"

namespace invh {

namespace detail {
std::atomic<int>& worker_counter() {
  static std::atomic<int> n{0};
  return n;
}
}  // namespace detail

int live_verifier_workers() { return detail::worker_counter().load(); }

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::DecFalse: return "DEC-FALSE";
    case Rule::DecProp: return "DEC-PROP";
    case Rule::DecU: return "DEC-U";
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view s) {
  for (Rule r : {Rule::DecFalse, Rule::DecProp, Rule::DecU}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

RuleApplication apply_rule(Verdict d_a, Verdict d_b) {
  if (d_b == Verdict::F) return {Rule::DecFalse, Verdict::F};
  if (d_a == Verdict::T) return {Rule::DecProp, d_b};
  return {Rule::DecU, Verdict::U};
}

namespace {

using Clock = std::chrono::steady_clock;

void mark_cancelled(VerifierResult& r) {
  r.verdict = Verdict::U;
  r.cancelled = true;
  r.reason = "cancelled";
  r.counterexample.reset();
}

Judgment conclude(VerifierResult d_a, VerifierResult d_b, double wall) {
  Judgment j;
  const auto app = apply_rule(d_a.verdict, d_b.verdict);
  j.rule = app.rule;
  j.outcome = app.outcome;
  j.total_cost = d_a.cost + d_b.cost;
  j.critical_cost = d_b.verdict == Verdict::F ? d_b.cost : std::max(d_a.cost, d_b.cost);
  j.decide_wall_time_s = wall;
  j.d_a = std::move(d_a);
  j.d_b = std::move(d_b);
  return j;
}

}  // namespace

Judgment decide(const Program& p, const Property& target, const Property& q,
                const VerifierConfig& cfg, const DecideOptions& opts) {
  if (auto why = validate_pure(q.predicate)) {
    throw ValidationError("candidate rejected: " + why->construct + ": " + why->reason);
  }
  scope_check(p, q);
  scope_check(p, target);

  const std::vector<Property> none;
  const std::vector<Property> assumed{q};

  if (opts.deterministic) {
    detail::WorkerGuard guard;
    const QueryControl ctl{opts.stop, opts.cost_cap};
    VerifierResult d_b = verify(p, assumed, target, cfg, ctl);
    VerifierResult d_a = verify(p, none, q, cfg, ctl);
    double wall = std::max(d_a.wall_time_s, d_b.wall_time_s);
    if (d_b.verdict == Verdict::F && d_a.cost > d_b.cost) {
      mark_cancelled(d_a);
      wall = d_b.wall_time_s;
    }
    return conclude(std::move(d_a), std::move(d_b), wall);
  }

  const auto t0 = Clock::now();
  std::stop_source stop_a;
  std::stop_source stop_b;
  std::stop_callback forward(opts.stop, [&] {
    stop_a.request_stop();
    stop_b.request_stop();
  });

  VerifierResult d_a;
  VerifierResult d_b;
  std::atomic<bool> b_refuted{false};
  Clock::time_point done_b{};
  {
    std::jthread ta([&] {
      detail::WorkerGuard guard;
      d_a = verify(p, none, q, cfg, QueryControl{stop_a.get_token(), opts.cost_cap});
    });
    std::jthread tb([&] {
      detail::WorkerGuard guard;
      d_b = verify(p, assumed, target, cfg, QueryControl{stop_b.get_token(), opts.cost_cap});
      done_b = Clock::now();
      if (d_b.verdict == Verdict::F) {
        b_refuted = true;
        stop_a.request_stop();
      }
    });
  }

  double wall = std::chrono::duration<double>(Clock::now() - t0).count();
  if (b_refuted && d_a.cancelled) {
    mark_cancelled(d_a);
    wall = std::chrono::duration<double>(done_b - t0).count();
  }
  return conclude(std::move(d_a), std::move(d_b), wall);
}

// ---------------------------------------------------------------------------
// Hoare rule

std::string_view to_string(Premise p) {
  switch (p) {
    case Premise::Initiation: return "initiation";
    case Premise::Consecution: return "consecution";
    case Premise::Exit: return "exit";
  }
  return "?";
}

std::string_view to_string(HoareResult::Outcome o) {
  switch (o) {
    case HoareResult::Outcome::Holds: return "holds";
    case HoareResult::Outcome::Fails: return "fails";
    case HoareResult::Outcome::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

LoopSpec make_loop_spec(const Program& p, std::string_view label, const Predicate& pre,
                        const Predicate& inv, const Predicate& post) {
  const Stmt* s = p.find_labeled_stmt(label);
  if (!s) throw ScopeError("unknown label '" + std::string(label) + "'");
  if (s->kind != Stmt::Kind::While) {
    throw ScopeError("label '" + std::string(label) + "' is not on a while statement");
  }
  return LoopSpec{p, std::string(label), s->expr, s->body, pre, inv, post};
}

namespace {

void collect_vars(const Expr& e, std::set<VarId>& out) {
  if (e.kind == ExprKind::Var) out.insert(e.var);
  for (const Expr& a : e.args) collect_vars(a, out);
}

void collect_vars(const Block& b, std::set<VarId>& out) {
  for (const Stmt& s : b) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        out.insert(s.target);
        collect_vars(s.expr, out);
        break;
      case Stmt::Kind::Nondet:
        out.insert(s.target);
        break;
      case Stmt::Kind::Skip:
        break;
      default:
        collect_vars(s.expr, out);
        break;
    }
    collect_vars(s.body, out);
    collect_vars(s.else_body, out);
  }
}

bool holds(const Expr& e, const State& s, Width w) {
  auto b = eval_bool(e, s, w);
  return b && *b;
}

constexpr std::string_view kBodyEnd = "$end";

}  // namespace

HoareResult check_hoare_while(const LoopSpec& spec, Width w, std::uint64_t budget) {
  std::set<VarId> used;
  collect_vars(spec.pre.expr, used);
  collect_vars(spec.inv.expr, used);
  collect_vars(spec.post.expr, used);
  collect_vars(spec.guard, used);
  collect_vars(spec.body, used);
  const std::vector<VarId> vars(used.begin(), used.end());

  HoareResult r;
  const std::uint64_t total = w.state_count(vars.size());
  if (total == 0 || total > budget) {
    r.outcome = HoareResult::Outcome::BudgetExceeded;
    return r;
  }

  // The body alone, followed by a marker that collects its final states.
  Block body = spec.body;
  Stmt end;
  end.kind = Stmt::Kind::Skip;
  end.label = std::string(kBodyEnd);
  body.push_back(end);
  const Program body_prog = Program::make(spec.program.decls(), std::move(body));

  auto for_each_state = [&](auto&& visit) {
    State s(spec.program.var_count(), 0);
    for (std::uint64_t n = 0; n < total; ++n) {
      std::uint64_t rest = n;
      for (std::size_t k = vars.size(); k-- > 0;) {
        s[vars[k]] = static_cast<Value>(rest % w.modulus());
        rest /= w.modulus();
      }
      if (!visit(s)) return false;
    }
    return true;
  };

  auto fail = [&](Premise p, const State& s, std::optional<State> succ = std::nullopt) {
    r.outcome = HoareResult::Outcome::Fails;
    r.premise = p;
    r.witness = s;
    r.successor = std::move(succ);
    return false;
  };

  // initiation
  if (!for_each_state([&](const State& s) {
        if (holds(spec.pre.expr, s, w) && !holds(spec.inv.expr, s, w)) {
          return fail(Premise::Initiation, s);
        }
        return true;
      })) {
    return r;
  }

  // consecution
  bool over_budget = false;
  if (!for_each_state([&](const State& s) {
        if (!holds(spec.inv.expr, s, w) || !holds(spec.guard, s, w)) return true;
        auto reach = enumerate_reachable(body_prog, w, budget, s);
        if (std::holds_alternative<BudgetExceeded>(reach)) {
          over_budget = true;
          return false;
        }
        const auto& after = std::get<Reachability>(reach).at_label.at(std::string(kBodyEnd));
        for (const State& t : after) {
          if (!holds(spec.inv.expr, t, w)) return fail(Premise::Consecution, s, t);
        }
        return true;
      })) {
    if (over_budget) r.outcome = HoareResult::Outcome::BudgetExceeded;
    return r;
  }

  // exit
  for_each_state([&](const State& s) {
    if (holds(spec.inv.expr, s, w) && !holds(spec.guard, s, w) && !holds(spec.post.expr, s, w)) {
      return fail(Premise::Exit, s);
    }
    return true;
  });
  return r;
}

}  // namespace invh
