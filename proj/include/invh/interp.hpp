#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "invh/instrument.hpp"
#include "invh/lang.hpp"
#include "invh/value.hpp"

namespace invh {

struct Configuration {
  Position pc;
  State state;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class Termination : std::uint8_t {
  NormalExit,
  AssumptionViolated,
  AssertionViolation,
};

std::string_view to_string(Termination t);

struct Trace {
  std::vector<Configuration> configs;
  /// Absent when the trace was truncated (complete == false).
  std::optional<Termination> end;
  /// Set for AssertionViolation: the failing statement or check location.
  std::optional<Position> violation_at;
  bool complete = true;
};

/// Either the successors of a configuration or how execution stops there.
struct StepResult {
  std::vector<Configuration> successors;
  std::optional<Termination> terminal;
};

/// Declared initialisers, 0 where absent.
State initial_state(const Program& p, Width w);

/// One small step. Nondet assignment fans out over all 2^W values;
/// evaluation faults are assertion violations at the faulting statement.
StepResult step(const Program& p, const Configuration& c, Width w);

struct Reachability {
  std::uint64_t configurations = 0;
  /// States observed on arrival at each label (every label has an entry).
  std::map<std::string, std::set<State>, std::less<>> at_label;
  /// One shortest trace per configuration that fails an assert.
  std::vector<Trace> violations;
};

struct BudgetExceeded {
  std::uint64_t budget = 0;
};

/// Exhaustive breadth-first closure from the initial configuration. The
/// budget bounds the number of distinct configurations ever inserted.
std::variant<Reachability, BudgetExceeded> enumerate_reachable(
    const Program& p, Width w, std::uint64_t budget,
    const std::optional<State>& initial = std::nullopt);

/// Supplies the value of each executed `nondet()`; called with the
/// position of the nondet statement. Results are wrapped to the width.
using Resolver = std::function<Value(Position)>;

/// Replays `values` in order, then 0.
Resolver sequence_resolver(std::vector<Value> values);

/// The nondet choices made along `t`, in order.
std::vector<Value> nondet_choices(const Program& p, const Trace& t);

/// Follows the single execution chosen by `resolver` for at most
/// `step_limit` steps. Each check is evaluated on arrival at its position;
/// a false or faulting check ends the trace with AssertionViolation there.
Trace run_concrete(const Program& p, Width w, const Resolver& resolver,
                   std::uint64_t step_limit, std::span<const CheckSpec> checks = {},
                   const std::optional<State>& initial = std::nullopt);

}  // namespace invh
