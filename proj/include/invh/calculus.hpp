#pragma once

#include <atomic>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>

#include "invh/verifier.hpp"

namespace invh {

enum class Rule : std::uint8_t { DecFalse, DecProp, DecU };

std::string_view to_string(Rule r);  // "DEC-FALSE", "DEC-PROP", "DEC-U"
std::optional<Rule> parse_rule(std::string_view s);

struct RuleApplication {
  Rule rule;
  Verdict outcome;
};

/// The unique rule for a pair of sub-verdicts. d_b = F wins over d_a = T.
RuleApplication apply_rule(Verdict d_a, Verdict d_b);

/// P => <target, q> evaluated. d_a = V(P, {}, q), d_b = V(P, {q}, target).
struct Judgment {
  Verdict outcome = Verdict::U;
  Rule rule = Rule::DecU;
  VerifierResult d_a;
  VerifierResult d_b;
  /// Wall time of the parallel composition.
  double decide_wall_time_s = 0.0;
  std::uint64_t total_cost = 0;
  /// Cost-based stand-in for completion time: the cost of the query that
  /// decided the outcome.
  std::uint64_t critical_cost = 0;
};

struct DecideOptions {
  /// Run both queries to completion and derive cancellation from costs
  /// instead of wall-clock order. Used with timeouts disabled.
  bool deterministic = false;
  std::stop_token stop;
  /// Shared cap on each query's cost; see QueryControl.
  const std::atomic<std::uint64_t>* cost_cap = nullptr;
};

/// Throws ValidationError if q is not a pure predicate. Both queries are
/// finished or cancelled when this returns.
Judgment decide(const Program& p, const Property& target, const Property& q,
                const VerifierConfig& cfg, const DecideOptions& opts = {});

/// Hoare rule for one while loop:
///   pre => I,  {I && B} S {I},  I && !B => Q
struct LoopSpec {
  Program program;
  std::string label;
  Expr guard;
  Block body;
  Predicate pre;
  Predicate inv;
  Predicate post;
};

/// Throws ScopeError unless `label` names a while statement of `p`.
LoopSpec make_loop_spec(const Program& p, std::string_view label, const Predicate& pre,
                        const Predicate& inv, const Predicate& post);

enum class Premise : std::uint8_t { Initiation, Consecution, Exit };
std::string_view to_string(Premise p);

struct HoareResult {
  enum class Outcome : std::uint8_t { Holds, Fails, BudgetExceeded };
  Outcome outcome = Outcome::Holds;
  std::optional<Premise> premise;
  /// Full program state (unlisted variables are 0).
  std::optional<State> witness;
  /// For consecution: a state reached by one body execution from the
  /// witness that violates the invariant.
  std::optional<State> successor;
};

std::string_view to_string(HoareResult::Outcome o);

/// Enumerates all width-W valuations of the variables mentioned by the
/// spec, in ascending order; every other variable stays 0. Premises are
/// checked in the order initiation, consecution, exit. A premise fails on
/// a state where its conclusion is false or faults.
HoareResult check_hoare_while(const LoopSpec& spec, Width w, std::uint64_t budget);

}  // namespace invh
