#include <gtest/gtest.h>

#include "invh/error.hpp"
#include "invh/predicate.hpp"
#include "support/families.hpp"

using namespace invh;

namespace {
const Program& fig1() {
  static const Program p = parse_program(fam::kFig1);
  return p;
}
const Program& xyz() {
  static const Program p = parse_program("int x; int y; int z;");
  return p;
}
}  // namespace

TEST(Purity, AcceptsPredicates) {
  for (const char* ok : {"x % 7 == 3", "x != 145", "x >= 0 && !(x > 3)", "true", "x / 2 < x"}) {
    EXPECT_FALSE(validate_pure(ok).has_value()) << ok;
  }
}

TEST(Purity, RejectsMutation) {
  struct Case {
    const char* text;
    const char* construct;
  };
  for (const Case& c : {Case{"x = 3", "="}, Case{"x++ > 0", "++"}, Case{"x += 1", "+="},
                        Case{"--x < 2", "--"}, Case{"x == nondet()", "nondet"},
                        Case{"x > 0; x = 1", ";"}, Case{"{ x > 0 }", "{"},
                        Case{"assume(x > 0)", "assume"}}) {
    const auto r = validate_pure(c.text);
    ASSERT_TRUE(r.has_value()) << c.text;
    EXPECT_EQ(r->construct, c.construct) << c.text;
  }
}

TEST(Purity, AstCheckWantsCondition) {
  const Predicate q = parse_predicate("x < 3", fig1());
  EXPECT_FALSE(validate_pure(q).has_value());
  Predicate bad{Expr::binary(ExprKind::Add, Expr::constant(1), Expr::constant(2))};
  EXPECT_TRUE(validate_pure(bad).has_value());
}

TEST(Parse, CanonicalText) {
  EXPECT_EQ(parse_predicate("x%7==3", fig1()).text(), parse_predicate(" x % 7 == 3 ", fig1()).text());
  EXPECT_EQ(parse_predicate("((x % 7) == 3)", fig1()), parse_predicate("x % 7 == 3", fig1()));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_predicate("y > 0", fig1()), ScopeError);
  EXPECT_THROW(parse_predicate("x +", fig1()), SyntaxError);
  EXPECT_THROW(parse_predicate("x + 1", fig1()), SyntaxError);
}

TEST(Eval, UnsignedModularArithmetic) {
  const Width w(8);
  const State s{250, 10, 0};
  auto v = [&](const char* text) {
    return eval_bool(parse_predicate(text, xyz()).expr, s, w);
  };
  EXPECT_EQ(v("x + y == 4"), true);      // 260 mod 256
  EXPECT_EQ(v("y - x == 16"), true);     // -240 mod 256
  EXPECT_EQ(v("-y == 246"), true);
  EXPECT_EQ(v("x > y"), true);           // unsigned order
  EXPECT_EQ(v("x / y == 25"), true);
  EXPECT_EQ(v("x % y == 0"), true);
  EXPECT_EQ(v("x * y == 196"), true);    // 2500 mod 256
}

TEST(Eval, DivisionByZeroFaults) {
  const Width w(4);
  const State s{5, 0, 1};
  auto v = [&](const char* text) { return eval_bool(parse_predicate(text, xyz()).expr, s, w); };
  EXPECT_FALSE(v("x / y == 0").has_value());
  EXPECT_FALSE(v("x % y == 0").has_value());
  // short circuit hides the fault
  EXPECT_EQ(v("y != 0 && x / y == 1"), false);
  EXPECT_EQ(v("y == 0 || x / y == 1"), true);
  EXPECT_FALSE(v("x / y == 1 || true").has_value());
}

TEST(Eval, ConstantsWrapToWidth) {
  const State s{1, 0, 0};
  EXPECT_EQ(eval_bool(parse_predicate("x == 17", xyz()).expr, s, Width(4)), true);
  EXPECT_EQ(eval_bool(parse_predicate("x == 17", xyz()).expr, s, Width(8)), false);
}

TEST(WidthRange, Bounds) {
  EXPECT_THROW(Width(1), std::invalid_argument);
  EXPECT_THROW(Width(17), std::invalid_argument);
  EXPECT_EQ(Width(16).max_value(), 65535u);
  EXPECT_EQ(Width().bits(), 8u);
}
