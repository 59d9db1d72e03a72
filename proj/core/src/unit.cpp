// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/unit.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

#include "sisso/error.hpp"

namespace sisso {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Unit Unit::base(std::string name, Rational exponent) {
  Unit u;
  u.add_exponent(name, exponent);
  return u;
}

Rational Unit::exponent(const std::string& base) const {
  auto it = exponents_.find(base);
  return it == exponents_.end() ? Rational(0) : it->second;
}

void Unit::add_exponent(const std::string& base, const Rational& e) {
  if (e.is_zero()) return;
  auto [it, inserted] = exponents_.try_emplace(base, e);
  if (!inserted) {
    it->second = it->second + e;
    if (it->second.is_zero()) exponents_.erase(it);
  }
}

Unit Unit::operator*(const Unit& other) const {
  Unit out = *this;
  for (const auto& [b, e] : other.exponents_) out.add_exponent(b, e);
  return out;
}

Unit Unit::operator/(const Unit& other) const {
  Unit out = *this;
  for (const auto& [b, e] : other.exponents_) out.add_exponent(b, -e);
  return out;
}

Unit Unit::pow(const Rational& p) const {
  Unit out;
  if (p.is_zero()) return out;
  for (const auto& [b, e] : exponents_) out.exponents_.emplace(b, e * p);
  return out;
}

std::string Unit::to_string() const {
  std::string out;
  for (const auto& [b, e] : exponents_) {
    if (!out.empty()) out += '*';
    out += b;
    if (e != Rational(1)) {
      out += '^';
      out += e.to_string();
    }
  }
  return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool valid_base_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return !(s.front() >= '0' && s.front() <= '9');
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw UnitParseError("bad exponent '" + std::string(s) + "' in unit '" + std::string(whole) +
                         "'");
  }
  return v;
}

}  // namespace

Unit parse_unit(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  Unit out;
  if (text.empty() || text == "1") return out;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t star = text.find('*', pos);
    if (star == std::string_view::npos) star = text.size();
    const std::string_view factor = trim(text.substr(pos, star - pos));
    if (factor.empty()) throw UnitParseError("empty factor in unit '" + std::string(whole) + "'");

    const std::size_t caret = factor.find('^');
    const std::string_view name = trim(factor.substr(0, caret));
    if (!valid_base_name(name)) {
      throw UnitParseError("bad base dimension '" + std::string(name) + "' in unit '" +
                           std::string(whole) + "'");
    }
    Rational e(1);
    if (caret != std::string_view::npos) {
      const std::string_view exp = trim(factor.substr(caret + 1));
      const std::size_t slash = exp.find('/');
      if (slash == std::string_view::npos) {
        e = Rational(parse_int(exp, whole));
      } else {
        const std::int64_t den = parse_int(exp.substr(slash + 1), whole);
        if (den == 0) throw UnitParseError("zero denominator in unit '" + std::string(whole) + "'");
        e = Rational(parse_int(exp.substr(0, slash), whole), den);
      }
    }
    out = out * Unit::base(std::string(name), e);
    pos = star + 1;
  }
  return out;
}

}  // namespace sisso
