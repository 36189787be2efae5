#include "support.hpp"

#include <gtest/gtest.h>

using namespace tmlcost;
using namespace tmlcost::lang;
using tmltest::q;

namespace {

Expr expr(std::string_view s) { return parse_expr(s); }

Store store(std::initializer_list<std::pair<const std::string, Value>> xs) { return Store(xs); }

}  // namespace

TEST(Parse, FibMethod) {
  auto p = tmltest::corpus("fib_cap1.tml");
  ASSERT_EQ(p->methods.size(), 1u);
  const auto& fib = p->methods[0];
  EXPECT_EQ(fib.name, "fib");
  ASSERT_EQ(fib.params.size(), 1u);
  EXPECT_EQ(fib.params[0].name, "n");
  EXPECT_EQ(fib.params[0].type, SimpleType::Int);
  EXPECT_EQ(p->find_method("fib"), &fib);
}

TEST(Parse, EmptyMain) {
  Program p = parse_program("{ } with 1");
  EXPECT_TRUE(p.methods.empty());
  EXPECT_EQ(p.main.capacity, q(1));
}

TEST(Parse, DuplicateParameter) {
  EXPECT_THROW(parse_program("Int m(Int x, Int x){ return x; } { } with 1"), WellFormednessError);
}

TEST(Parse, DuplicateMethod) {
  EXPECT_THROW(parse_program("Int m(){ return 0; } Int m(){ return 1; } { } with 1"), WellFormednessError);
}

TEST(Parse, ReturnWithContinuation) {
  EXPECT_THROW(parse_program("Int m(){ Int x; return 0; x = 1; } { } with 1"), WellFormednessError);
  EXPECT_NO_THROW(parse_program("Int m(Int n){ if (n <= 1) { return 0; } else { return 1; } } { } with 1"));
}

TEST(Parse, SyncArgumentsMustBeVariables) {
  EXPECT_THROW(parse_program("Int m(Int n){ Int x; x = this.m(n + 1); return x; } { } with 1"), WellFormednessError);
  EXPECT_NO_THROW(parse_program("Int m(Int n){ Int x; x = this.m(n); return x; } { } with 1"));
}

TEST(Parse, UndeclaredVariable) {
  EXPECT_THROW(parse_program("{ x = 1; } with 1"), WellFormednessError);
}

TEST(Parse, ErrorCarriesLineAndColumn) {
  try {
    parse_program("{\n  Int x;\n  x = ;\n} with 1");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.loc.line, 3);
    EXPECT_GT(e.loc.column, 0);
  }
}

TEST(Parse, CapacityMustBePositive) {
  EXPECT_ANY_THROW(parse_program("{ } with 0"));
}

TEST(Parse, FullSyntaxRoundTrips) {
  auto p = tmltest::corpus("wrapper_with_external_log.tml");
  Program again = parse_program(print_program(*p));
  EXPECT_EQ(again, *p);
  EXPECT_EQ(print_program(again), print_program(*p));
}

TEST(Classify, SubtractionNormalizesToSizeExpr) {
  Expr e = expr("n - 1");
  ASSERT_EQ(e.cls(), ExprClass::Size);
  EXPECT_EQ(e.size_expr().linear(), LinExpr::var("n") + LinExpr(q(-1)));
}

TEST(Classify, Comparison) { EXPECT_EQ(expr("n <= 1").cls(), ExprClass::Size); }

TEST(Classify, NonLinearIsNonSize) {
  EXPECT_EQ(expr("x * y").cls(), ExprClass::NonSize);
  EXPECT_EQ(expr("x / 2").cls(), ExprClass::NonSize);
  EXPECT_EQ(expr("2 * x + 3").cls(), ExprClass::Size);
}

TEST(Classify, SpecialIdentifiers) {
  EXPECT_EQ(expr("this").cls(), ExprClass::This);
  EXPECT_EQ(expr("this.capacity").cls(), ExprClass::ThisCapacity);
  EXPECT_EQ(expr("this.capacity * 2").cls(), ExprClass::Size);
}

TEST(Classify, StableUnderPrinting) {
  for (const char* s : {"n - 1", "n <= 1", "x * y", "a <= b and b <= c or x", "2 * (x - y)", "this", "x / 2"}) {
    Expr e = expr(s);
    Expr again = expr(print_expr(e));
    EXPECT_EQ(again.cls(), e.cls()) << s;
    EXPECT_EQ(again, e) << s;
  }
}

TEST(EvalPure, Arithmetic) {
  EvalContext ctx{ObjectId{0}, q(1)};
  EXPECT_EQ(eval_number(expr("n - 1"), store({{"n", q(5)}}), ctx), q(4));
  EXPECT_EQ(eval_number(expr("x * y"), store({{"x", q(3)}, {"y", q(1, 2)}}), ctx), q(3, 2));
}

TEST(EvalPure, ComparisonIsTrue) {
  EvalContext ctx{ObjectId{0}, q(1)};
  EXPECT_EQ(eval_number(expr("n <= 1"), store({{"n", q(1)}}), ctx), q(1));
  EXPECT_EQ(eval_number(expr("n <= 1"), store({{"n", q(2)}}), ctx), q(0));
}

TEST(EvalPure, ThisCapacity) {
  EvalContext ctx{ObjectId{3}, q(2)};
  EXPECT_EQ(eval_number(expr("this.capacity"), {}, ctx), q(2));
  EXPECT_EQ(std::get<ObjectId>(eval_pure(expr("this"), {}, ctx)), ObjectId{3});
}

TEST(EvalPure, Errors) {
  EvalContext ctx{ObjectId{0}, q(1)};
  try {
    eval_pure(expr("n + 1"), {}, ctx);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.kind, EvalError::Kind::UnboundVariable);
  }
  try {
    eval_pure(expr("f + 1"), store({{"f", FutureId{1}}}), ctx);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.kind, EvalError::Kind::TypeMismatch);
  }
}

TEST(EvalPure, DoesNotMutateStore) {
  EvalContext ctx{ObjectId{0}, q(1)};
  Store l = store({{"n", q(5)}});
  Store before = l;
  Value a = eval_pure(expr("n * n - 1"), l, ctx);
  Value b = eval_pure(expr("n * n - 1"), l, ctx);
  EXPECT_EQ(a, b);
  EXPECT_EQ(l, before);
}

TEST(SizeExpr, NegationOfIntegerComparison) {
  SizeExpr g = expr("n <= 1").size_expr();
  EXPECT_EQ(g.negate().str(Notation::Math), "n ≥ 2");
}
