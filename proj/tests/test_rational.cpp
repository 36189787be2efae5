#include "tmlcost/rational.hpp"

#include <gtest/gtest.h>

using tmlcost::Rational;

TEST(Rational, LowestTermsAndPositiveDenominator) {
  Rational r(6, -4);
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("-7").str(), "-7");
}

TEST(Rational, ExactArithmetic) {
  Rational third(1, 3);
  EXPECT_EQ(third + third + third, Rational(1));
  EXPECT_EQ(Rational(1, 2) - Rational(1, 4) - Rational(1, 4), Rational(0));
  EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
  EXPECT_EQ(Rational(1) / Rational(3), third);
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
}

TEST(Rational, Floor) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-4).floor(), -4);
}

TEST(Rational, DivisionByZeroThrows) {
  EXPECT_THROW(Rational(1, 0), tmlcost::DivisionByZero);
  EXPECT_THROW(Rational(1) / Rational(0), tmlcost::DivisionByZero);
}

TEST(Rational, NoOverflowOnLargeValues) {
  Rational r(1);
  for (int i = 0; i < 200; ++i) r = r * Rational(2);
  for (int i = 0; i < 200; ++i) r = r / Rational(2);
  EXPECT_EQ(r, Rational(1));
}

TEST(Rational, RejectsGarbage) {
  EXPECT_ANY_THROW(Rational::parse("1/x"));
  EXPECT_ANY_THROW(Rational::parse(""));
}
