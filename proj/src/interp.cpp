#include "invh/interp.hpp"

#include <deque>

#include "config_table.hpp"
#include "invh/predicate.hpp"
#include "semantics.hpp"

namespace invh {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::NormalExit: return "normal-exit";
    case Termination::AssumptionViolated: return "assumption-violated";
    case Termination::AssertionViolation: return "assertion-violation";
  }
  return "?";
}

State initial_state(const Program& p, Width w) {
  State s(p.var_count(), 0);
  for (std::size_t i = 0; i < p.decls().size(); ++i) {
    if (p.decls()[i].init) s[i] = w.wrap(*p.decls()[i].init);
  }
  return s;
}

StepResult step(const Program& p, const Configuration& c, Width w) {
  StepResult r;
  State scratch;
  r.terminal = detail::expand(p, c.pc, c.state, w, scratch,
                              [&](Position next, std::span<const Value> s) {
                                r.successors.push_back(Configuration{next, State(s.begin(), s.end())});
                              });
  return r;
}

std::variant<Reachability, BudgetExceeded> enumerate_reachable(const Program& p, Width w,
                                                               std::uint64_t budget,
                                                               const std::optional<State>& initial) {
  Reachability out;
  for (const auto& name : p.label_order()) out.at_label[name];

  std::vector<const std::string*> label_at(p.nodes().size() + 1, nullptr);
  for (const auto& [name, pos] : p.labels()) label_at[pos.index] = &name;

  detail::ConfigTable table(p.var_count());
  const State init = initial ? *initial : initial_state(p, w);
  if (budget < 1) return BudgetExceeded{budget};
  table.insert(p.entry(), init, detail::ConfigTable::kNoParent);

  State current;
  State scratch;
  bool exceeded = false;
  for (std::uint32_t i = 0; i < table.size() && !exceeded; ++i) {
    const Position pc = table.pc(i);
    auto s = table.state(i);
    current.assign(s.begin(), s.end());
    if (const std::string* name = label_at[pc.index]) {
      out.at_label[*name].insert(current);
    }
    auto terminal = detail::expand(p, pc, current, w, scratch,
                                   [&](Position next, std::span<const Value> succ) {
                                     if (exceeded) return;
                                     auto [idx, fresh] = table.insert(next, succ, i);
                                     if (fresh && table.size() > budget) exceeded = true;
                                   });
    if (terminal == Termination::AssertionViolation) {
      out.violations.push_back(
          Trace{table.path_to(i), Termination::AssertionViolation, pc, true});
    }
  }
  if (exceeded) return BudgetExceeded{budget};
  out.configurations = table.size();
  return out;
}

Resolver sequence_resolver(std::vector<Value> values) {
  return [values = std::move(values), next = std::size_t{0}](Position) mutable -> Value {
    return next < values.size() ? values[next++] : 0;
  };
}

std::vector<Value> nondet_choices(const Program& p, const Trace& t) {
  std::vector<Value> out;
  for (std::size_t i = 0; i + 1 < t.configs.size(); ++i) {
    const Position pc = t.configs[i].pc;
    if (pc == p.exit()) break;
    const Node& n = p.node(pc);
    if (n.kind == Node::Kind::Nondet) out.push_back(t.configs[i + 1].state[n.var]);
  }
  return out;
}

Trace run_concrete(const Program& p, Width w, const Resolver& resolver, std::uint64_t step_limit,
                   std::span<const CheckSpec> checks, const std::optional<State>& initial) {
  Trace t;
  Configuration c{p.entry(), initial ? *initial : initial_state(p, w)};

  auto check_fails = [&](const Configuration& cfg) {
    for (const auto& chk : checks) {
      if (chk.position == cfg.pc) {
        auto b = eval_predicate(chk.predicate, cfg.state, w);
        if (!b || !*b) return true;
      }
    }
    return false;
  };

  State scratch;
  for (std::uint64_t steps = 0;; ++steps) {
    t.configs.push_back(c);
    if (check_fails(c)) {
      t.end = Termination::AssertionViolation;
      t.violation_at = c.pc;
      return t;
    }
    if (steps >= step_limit) {
      t.complete = false;
      return t;
    }
    const bool is_nondet = c.pc != p.exit() && p.node(c.pc).kind == Node::Kind::Nondet;
    Configuration next;
    bool have_next = false;
    std::optional<Termination> terminal;
    if (is_nondet) {
      const Node& n = p.node(c.pc);
      next = Configuration{n.next, c.state};
      next.state[n.var] = w.wrap(resolver(c.pc));
      have_next = true;
    } else {
      terminal = detail::expand(p, c.pc, c.state, w, scratch,
                                [&](Position np, std::span<const Value> s) {
                                  next = Configuration{np, State(s.begin(), s.end())};
                                  have_next = true;
                                });
    }
    if (terminal) {
      t.end = terminal;
      if (*terminal == Termination::AssertionViolation) t.violation_at = c.pc;
      return t;
    }
    if (!have_next) {
      t.end = Termination::NormalExit;
      return t;
    }
    c = std::move(next);
  }
}

}  // namespace invh
