#pragma once

#include <span>
#include <string>
#include <vector>

#include "invh/lang.hpp"
#include "invh/predicate.hpp"

namespace invh {

/// A predicate asserted at every arrival to a labeled location.
struct Property {
  Predicate predicate;
  std::string location;

  friend bool operator==(const Property&, const Property&) = default;
};

/// Parses "PRED@LABEL" (split at the last '@') against `p`.
/// Throws SyntaxError/ScopeError, including for an unknown label.
Property parse_property(std::string_view spec, const Program& p);
Property make_property(std::string_view pred, std::string_view label, const Program& p);

/// Throws ScopeError unless `prop.location` is a label of `p` and every
/// variable of the predicate is declared in `p`.
void scope_check(const Program& p, const Property& prop);

/// What a verifier must establish: `predicate` holds (and evaluates without
/// fault) on every arrival at `position` of the program it was made for.
struct CheckSpec {
  std::string label;
  Position position;
  Predicate predicate;
};

/// Asm(P, A): inserts `assume(psi)` immediately before each labeled
/// statement, in the order of `assumptions`. For a labeled `while` the same
/// assumes are also appended to the end of the loop body, so that every
/// arrival at the loop head, including back edges, evaluates them.
Program insert_assumes(const Program& p, std::span<const Property> assumptions);

/// Resolves `prop` against `p`. Throws ScopeError for an unknown label.
CheckSpec make_check(const Program& p, const Property& prop);

/// Source text of Asm(P, A) with the check inlined as `assert(phi)` at
/// every arrival to its location, for tools that only understand asserts.
std::string export_with_check(const Program& p, std::span<const Property> assumptions,
                              const Property& check);

}  // namespace invh
