// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "sisso/error.hpp"
#include "sisso/operators.hpp"
#include "sisso/unit.hpp"

namespace sisso {
namespace {

TEST(Rational, ReducesAndNormalizesSign) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(1, -2), Rational(-1, 2));
  EXPECT_EQ(Rational(1, 2).to_string(), "1/2");
  EXPECT_EQ(Rational(-3).to_string(), "-3");
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(Unit, ToStringOrdersBases) {
  const Unit j = Unit::base("kg") * Unit::base("m").pow(2) / Unit::base("s").pow(2);
  EXPECT_EQ(j.to_string(), "kg*m^2*s^-2");
  EXPECT_EQ(Unit().to_string(), "");
  EXPECT_TRUE((Unit::base("m") / Unit::base("m")).dimensionless());
}

TEST(Unit, ParseRoundTrip) {
  for (const char* text : {"m", "kg*m^2*s^-2", "m^1/2", "AA^-3/2*eV"}) {
    EXPECT_EQ(parse_unit(text).to_string(), parse_unit(parse_unit(text).to_string()).to_string());
  }
  EXPECT_EQ(parse_unit("m^1/2"), Unit::base("m", Rational(1, 2)));
  EXPECT_TRUE(parse_unit("").dimensionless());
  EXPECT_TRUE(parse_unit("1").dimensionless());
  EXPECT_THROW(parse_unit("m^"), UnitParseError);
  EXPECT_THROW(parse_unit("m^1/0"), UnitParseError);
  EXPECT_THROW(parse_unit("*m"), UnitParseError);
}

TEST(Unit, OperatorRules) {
  const Unit m = Unit::base("m");
  const Unit s = Unit::base("s");
  const Unit ms[] = {m, s};
  const Unit mm[] = {m, m};
  EXPECT_THROW(unit_of(OpKind::add, ms), UnitError);
  EXPECT_EQ(unit_of(OpKind::add, mm), m);
  EXPECT_EQ(unit_of(OpKind::abs_diff, mm), m);
  EXPECT_EQ(unit_of(OpKind::mul, ms), m * s);
  EXPECT_EQ(unit_of(OpKind::div, ms), m / s);
  const Unit one[] = {m};
  EXPECT_EQ(unit_of(OpKind::sqrt, one), m.pow(Rational(1, 2)));
  EXPECT_EQ(unit_of(OpKind::cbrt, one), m.pow(Rational(1, 3)));
  EXPECT_EQ(unit_of(OpKind::six_pow, one), m.pow(6));
  EXPECT_EQ(unit_of(OpKind::inv, one), m.pow(-1));
  EXPECT_THROW(unit_of(OpKind::log, one), UnitError);
  EXPECT_THROW(unit_of(OpKind::exp, one), UnitError);
  const Unit none[] = {Unit()};
  EXPECT_TRUE(unit_of(OpKind::exp, none).dimensionless());
  EXPECT_FALSE(try_unit_of(OpKind::sub, ms).has_value());
}

TEST(Unit, ErrorKinds) {
  const Unit ms[] = {Unit::base("m"), Unit::base("s")};
  try {
    unit_of(OpKind::sub, ms);
    FAIL();
  } catch (const UnitError& e) {
    EXPECT_EQ(e.kind(), UnitErrorKind::mismatched_addition);
  }
  const Unit m[] = {Unit::base("m")};
  try {
    unit_of(OpKind::sin, m);
    FAIL();
  } catch (const UnitError& e) {
    EXPECT_EQ(e.kind(), UnitErrorKind::requires_dimensionless);
  }
}

Unit random_unit(std::mt19937_64& rng) {
  static const char* bases[] = {"m", "s", "kg", "K", "eV"};
  std::uniform_int_distribution<int> count(0, 4), pick(0, 4), num(-6, 6), den(1, 4);
  Unit u;
  for (int k = count(rng); k > 0; --k) u = u * Unit::base(bases[pick(rng)], Rational(num(rng), den(rng)));
  return u;
}

TEST(UnitProperty, AbelianGroupUnderMulDiv) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Unit u = random_unit(rng);
    const Unit v = random_unit(rng);
    const Unit w = random_unit(rng);
    const Unit inv_in[] = {Unit(), u};
    const Unit inv = unit_of(OpKind::div, inv_in);
    const Unit prod_in[] = {u, inv};
    EXPECT_TRUE(unit_of(OpKind::mul, prod_in).dimensionless()) << u.to_string();
    EXPECT_EQ(u * v, v * u);
    EXPECT_EQ((u * v) * w, u * (v * w));
    EXPECT_EQ(u * Unit(), u);
    EXPECT_EQ(parse_unit(u.to_string()), u);
  }
}

TEST(Operators, NamesRoundTrip) {
  for (const auto& op : all_operators()) {
    EXPECT_EQ(op_from_name(op.name), op.kind);
    EXPECT_EQ(op_info(op.kind).name, op.name);
  }
  EXPECT_FALSE(op_from_name("tanh").has_value());
  EXPECT_TRUE(op_info(OpKind::mul).commutative);
  EXPECT_TRUE(op_info(OpKind::abs_diff).commutative);
  EXPECT_FALSE(op_info(OpKind::div).commutative);
  EXPECT_EQ(op_info(OpKind::sqrt).arity, 1);
}

}  // namespace
}  // namespace sisso
