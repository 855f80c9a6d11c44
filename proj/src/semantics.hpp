#pragma once

#include <optional>
#include <span>

#include "invh/interp.hpp"
#include "invh/predicate.hpp"

namespace invh::detail {

/// Expands one configuration. Calls `emit(Position, std::span<const Value>)`
/// per successor and returns nullopt, or returns the terminal outcome.
/// `scratch` is reused storage for successor states.
template <class Emit>
std::optional<Termination> expand(const Program& p, Position pc, std::span<const Value> state,
                                  Width w, State& scratch, Emit&& emit) {
  if (pc == p.exit()) return Termination::NormalExit;
  const Node& n = p.node(pc);
  switch (n.kind) {
    case Node::Kind::Assign: {
      auto v = eval_int(n.expr, state, w);
      if (!v) return Termination::AssertionViolation;
      scratch.assign(state.begin(), state.end());
      scratch[n.var] = *v;
      emit(n.next, std::span<const Value>(scratch));
      return std::nullopt;
    }
    case Node::Kind::Nondet: {
      scratch.assign(state.begin(), state.end());
      const Value top = w.max_value();
      for (Value v = 0;; ++v) {
        scratch[n.var] = v;
        emit(n.next, std::span<const Value>(scratch));
        if (v == top) break;
      }
      return std::nullopt;
    }
    case Node::Kind::Branch: {
      auto b = eval_bool(n.expr, state, w);
      if (!b) return Termination::AssertionViolation;
      emit(*b ? n.next : n.alt, state);
      return std::nullopt;
    }
    case Node::Kind::Assert: {
      auto b = eval_bool(n.expr, state, w);
      if (!b || !*b) return Termination::AssertionViolation;
      emit(n.next, state);
      return std::nullopt;
    }
    case Node::Kind::Assume: {
      auto b = eval_bool(n.expr, state, w);
      if (!b) return Termination::AssertionViolation;
      if (!*b) return Termination::AssumptionViolated;
      emit(n.next, state);
      return std::nullopt;
    }
    case Node::Kind::Skip:
      emit(n.next, state);
      return std::nullopt;
  }
  return Termination::AssertionViolation;
}

}  // namespace invh::detail
