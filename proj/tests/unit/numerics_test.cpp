// Copyright 2026 The spinnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "spinnet/error.hpp"
#include "spinnet/numerics.hpp"

namespace spinnet {
namespace {

TEST(HalfInt, ParsesIntegersAndHalves) {
  EXPECT_EQ(HalfInt::parse("3/2").twice(), 3);
  EXPECT_EQ(HalfInt::parse("-1/2").twice(), -1);
  EXPECT_EQ(HalfInt::parse("2").twice(), 4);
  EXPECT_EQ(HalfInt::parse("+1").twice(), 2);
  EXPECT_EQ(HalfInt::parse("4/2").twice(), 4);
}

TEST(HalfInt, RejectsMalformedText) {
  EXPECT_THROW(HalfInt::parse("1.5"), ParseError);
  EXPECT_THROW(HalfInt::parse("1/3"), ParseError);
  EXPECT_THROW(HalfInt::parse(""), ParseError);
  EXPECT_THROW(HalfInt::parse("a/2"), ParseError);
  try {
    HalfInt::parse("3/4");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(HalfInt, PrintsCanonically) {
  EXPECT_EQ(HalfInt::from_twice(3).str(), "3/2");
  EXPECT_EQ(HalfInt::from_twice(-1).str(), "-1/2");
  EXPECT_EQ(HalfInt(2).str(), "2");
  for (int t = -9; t <= 9; ++t) {
    EXPECT_EQ(HalfInt::parse(HalfInt::from_twice(t).str()).twice(), t);
  }
}

TEST(HalfInt, Arithmetic) {
  const HalfInt a = HalfInt::from_twice(3), b = HalfInt::from_twice(1);
  EXPECT_EQ((a + b).twice(), 4);
  EXPECT_EQ((a - b).twice(), 2);
  EXPECT_EQ((-a).twice(), -3);
  EXPECT_EQ(a.dimension(), 4);
  EXPECT_TRUE((a + b).is_integer());
  EXPECT_LT(b, a);
  EXPECT_EQ(abs(-a), a);
}

TEST(Triangle, SelectionRules) {
  const auto h = [](int t) { return HalfInt::from_twice(t); };
  EXPECT_TRUE(triangle_ok(h(1), h(1), h(0)));
  EXPECT_TRUE(triangle_ok(h(1), h(1), h(2)));
  EXPECT_FALSE(triangle_ok(h(1), h(1), h(4)));
  EXPECT_FALSE(triangle_ok(h(1), h(1), h(1)));  // parity
  EXPECT_FALSE(triangle_ok(h(2), h(2), h(-2)));
  EXPECT_TRUE(triangle_ok(h(0), h(5), h(5)));
}

TEST(Phase, IntegerExponentsOnly) {
  EXPECT_EQ(phase(HalfInt(3)), -1);
  EXPECT_EQ(phase(HalfInt(-2)), 1);
  EXPECT_THROW(phase(HalfInt::from_twice(1)), DomainError);
}

TEST(Factorial, ValuesAndLimits) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(10), 3628800);
  EXPECT_EQ(factorial(25), BigInt("15511210043330985984000000"));
  EXPECT_THROW(factorial(-1), DomainError);
  EXPECT_THROW(factorial(kMaxFactorial + 1), ResourceLimitError);
}

TEST(RationalSqrt, PerfectSquaresOnly) {
  EXPECT_EQ(*rational_sqrt(Rational(9, 4)), Rational(3, 2));
  EXPECT_FALSE(rational_sqrt(Rational(2)).has_value());
  EXPECT_FALSE(rational_sqrt(Rational(-1)).has_value());
  EXPECT_EQ(*rational_sqrt(Rational(0)), Rational(0));
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(to_string(Rational(1, 36)), "1/36");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("x"), ParseError);
}

TEST(QRoot, Invariants) {
  EXPECT_THROW(QRoot(1, Rational(-1)), DomainError);
  EXPECT_THROW(QRoot(0, Rational(1)), DomainError);
  EXPECT_THROW(QRoot(2, Rational(1)), DomainError);
  EXPECT_TRUE(QRoot().is_zero());
}

TEST(QRoot, ArithmeticAndPrinting) {
  const QRoot half = QRoot::sqrt_of(Rational(1, 4));
  EXPECT_EQ(half.str(), "1/2");
  const QRoot r = -QRoot::sqrt_of(Rational(1, 3));
  EXPECT_EQ(r.str(), "-sqrt(1/3)");
  EXPECT_EQ((r * r).str(), "1/3");
  EXPECT_EQ(QRoot::from_rational(Rational(-2, 3)).square(), Rational(4, 9));
  EXPECT_LT(r, half);
  EXPECT_NEAR(r.to_double(), -0.5773502691896257, 1e-16);
  EXPECT_EQ(to_decimal(half.to_real(30), 30).substr(0, 4), "0.5");
}

TEST(QRoot, CommensurateSums) {
  const QRoot a = QRoot::sqrt_of(Rational(2));
  const QRoot b = QRoot::sqrt_of(Rational(8));
  const auto s = sum_if_commensurate(a, b);  // 3 sqrt 2
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->square(), Rational(18));
  EXPECT_FALSE(sum_if_commensurate(a, QRoot::sqrt_of(Rational(3))).has_value());
  const auto zero = sum_if_commensurate(a, -a);
  ASSERT_TRUE(zero.has_value());
  EXPECT_TRUE(zero->is_zero());
}

TEST(RadicalSum, StaysExactThenFallsBack) {
  RadicalSum s(40);
  s += QRoot::sqrt_of(Rational(1, 2));
  s += QRoot::sqrt_of(Rational(9, 2));
  ASSERT_TRUE(s.is_exact());
  EXPECT_EQ(s.exact()->square(), Rational(8));
  s += QRoot::sqrt_of(Rational(3));
  EXPECT_FALSE(s.is_exact());
  const double expected = 2 * std::sqrt(2.0) + std::sqrt(3.0);
  EXPECT_NEAR(s.real().convert_to<double>(), expected, 1e-14);
}

TEST(ScopedDigits, RestoresPrecision) {
  const unsigned before = MPReal::default_precision();
  {
    ScopedDigits guard(120);
    EXPECT_EQ(MPReal::default_precision(), 120u);
  }
  EXPECT_EQ(MPReal::default_precision(), before);
}

}  // namespace
}  // namespace spinnet
