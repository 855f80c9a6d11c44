#pragma once

// Random MiniWhile programs and properties for the fuzz tests.

#include <random>
#include <string>
#include <vector>

#include "invh/instrument.hpp"

namespace gen {

struct Shape {
  unsigned vars = 3;
  unsigned max_statements = 20;
  unsigned max_loops = 2;
  unsigned bits = 4;
};

struct Case {
  std::string source;
  invh::Program program;
  invh::Property target;
  /// Some random, some read off the exact reachable states (so correct).
  std::vector<invh::Property> candidates;
};

/// Program text with at least one nondet and at least one label.
std::string random_program(std::mt19937_64& rng, const Shape& shape);

/// A random condition over the first `vars` variables.
std::string random_condition(std::mt19937_64& rng, unsigned vars, unsigned bits, int depth = 2);

/// A predicate true on every state in `states`, built from simple bounds.
std::string true_condition(std::mt19937_64& rng, const std::vector<invh::State>& states,
                           unsigned vars, unsigned bits);

Case random_case(std::mt19937_64& rng, const Shape& shape, unsigned candidates = 3);

/// Random properties at random labels; roughly half hold in `p`.
std::vector<invh::Property> random_properties(std::mt19937_64& rng, const invh::Program& p,
                                              unsigned bits, unsigned count);

}  // namespace gen
