#include <gtest/gtest.h>

#include <limits>

#include "typeb/clt.hpp"
#include "typeb/polynomial.hpp"

using namespace typeb;

TEST(BivariatePoly, ZeroCoefficientsAreNotStored) {
  BivariatePoly p;
  p.add_term(3, 1, 2);
  p.add_term(-3, 1, 2);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.terms().size(), 0u);
}

TEST(BivariatePoly, ArithmeticIsExact) {
  // (1 + rho)(1 + q) = 1 + q + rho + q rho
  BivariatePoly a = BivariatePoly::constant(1);
  a.add_term(1, 0, 1);
  BivariatePoly b = BivariatePoly::constant(1);
  b.add_term(1, 1, 0);
  const BivariatePoly c = a * b;
  EXPECT_EQ(c.coefficient(0, 0), 1);
  EXPECT_EQ(c.coefficient(1, 0), 1);
  EXPECT_EQ(c.coefficient(0, 1), 1);
  EXPECT_EQ(c.coefficient(1, 1), 1);
  EXPECT_EQ((c + c).coefficient(1, 1), 2);
  EXPECT_EQ((c * 5).coefficient(1, 1), 5);
  EXPECT_DOUBLE_EQ(c.evaluate(0.5, 0.25), 1.5 * 1.25);
}

TEST(BivariatePoly, Substitutions) {
  BivariatePoly p;
  p.add_term(2, 0, 0);
  p.add_term(3, 1, 1);
  p.add_term(4, 2, 2);
  EXPECT_EQ(p.second_at_zero(), BivariatePoly::constant(2));
  const BivariatePoly one = p.second_at_one();
  EXPECT_EQ(one.coefficient(1), 3);
  EXPECT_EQ(one.coefficient(2), 4);
  EXPECT_EQ(p.swapped().coefficient(2, 2), 4);
  EXPECT_EQ(p.max_first_degree(), 2);
  EXPECT_EQ(p.max_second_degree(), 2);
  EXPECT_TRUE(p.has_nonnegative_coefficients());
  EXPECT_FALSE((p * -1).has_nonnegative_coefficients());
}

TEST(BivariatePoly, OverflowIsDetected) {
  BivariatePoly p;
  p.add_term(std::numeric_limits<std::int64_t>::max(), 0, 0);
  EXPECT_ANY_THROW(p.add_term(1, 0, 0));
}

TEST(BivariatePoly, RationalEvaluation) {
  BivariatePoly p;
  p.add_term(1, 2, 0);
  p.add_term(-1, 0, 1);
  const Rational v = p.evaluate<Rational>(Rational(1, 3), Rational(1, 9));
  EXPECT_EQ(v, Rational(0));
}

TEST(BivariatePoly, ToStringIsReadable) {
  BivariatePoly p("q", "");
  p.add_term(5, 0);
  p.add_term(6, 1);
  p.add_term(1, 3);
  EXPECT_EQ(p.to_string(), "5 + 6*q + q^3");
}

TEST(Rationals, DoublesConvertExactly) {
  EXPECT_EQ(to_rational(0.5), Rational(1, 2));
  EXPECT_EQ(to_rational(-0.375), Rational(-3, 8));
  EXPECT_EQ(to_rational(0.0), Rational(0));
  // 0.3 is not dyadic; its double is a 53-bit mantissa over a power of two.
  const Rational r = to_rational(0.3);
  EXPECT_EQ(static_cast<double>(r), 0.3);
  EXPECT_NE(r, Rational(3, 10));
}
