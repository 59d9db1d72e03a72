// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace sisso {

/// Reduced fraction with positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational&, const Rational&) = default;

  /// "2", "-1", "1/2", "-2/3".
  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Physical unit: product of named base dimensions raised to rational powers.
/// Zero exponents are never stored, so the empty map is dimensionless.
class Unit {
 public:
  Unit() = default;
  static Unit base(std::string name, Rational exponent = Rational(1));

  bool dimensionless() const noexcept { return exponents_.empty(); }
  const std::map<std::string, Rational>& exponents() const noexcept { return exponents_; }
  Rational exponent(const std::string& base) const;

  Unit operator*(const Unit& other) const;
  Unit operator/(const Unit& other) const;
  Unit pow(const Rational& p) const;

  friend bool operator==(const Unit&, const Unit&) = default;

  /// Flat product form, bases sorted: "kg*m^2*s^-2", "m^1/2". Empty string
  /// for dimensionless.
  std::string to_string() const;

 private:
  void add_exponent(const std::string& base, const Rational& e);

  std::map<std::string, Rational> exponents_;
};

/// Parses the flat product grammar produced by Unit::to_string. Accepts ""
/// and "1" as dimensionless. Throws UnitParseError.
Unit parse_unit(std::string_view text);

}  // namespace sisso
