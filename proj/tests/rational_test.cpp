// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

#include "bmink/rational.hpp"

#include <gtest/gtest.h>

#include <random>

namespace bmink {
namespace {

TEST(Rational, CanonicalForm) {
  Rational r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_GT(r.den(), 0);
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
}

TEST(Rational, ParsesDecimals) {
  EXPECT_EQ(Rational::parse("0.01"), Rational(1, 100));
  EXPECT_EQ(Rational::parse("-1.25"), Rational(-5, 4));
  EXPECT_EQ(Rational::parse("2.5e-2"), Rational(1, 40));
  EXPECT_EQ(Rational::parse("3e2"), Rational(300));
}

TEST(Rational, RejectsMalformedInput) {
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1.2.3"), std::invalid_argument);
  EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(Rational::from_double(0.375), Rational(3, 8));
  Rational tenth = Rational::from_double(0.1);
  EXPECT_NE(tenth, Rational(1, 10));
  EXPECT_EQ(tenth.to_double(), 0.1);
}

TEST(Rational, FieldAxiomsOnRandomValues) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
  for (int i = 0; i < 500; ++i) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!b.is_zero()) {
      EXPECT_EQ((a / b) * b, a);
    }
    EXPECT_EQ(Rational::parse(a.str()), a);
  }
}

TEST(Rational, IntegerPower) {
  EXPECT_EQ(pow(Rational(-2, 3), 3), Rational(-8, 27));
  EXPECT_EQ(pow(Rational(5), 0), Rational(1));
}

}  // namespace
}  // namespace bmink
