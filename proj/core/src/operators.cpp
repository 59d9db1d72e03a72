// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/operators.hpp"

#include <string>

#include "sisso/error.hpp"

namespace sisso {

namespace {

constexpr std::array<Operator, kOpKindCount> kOperators{{
    {OpKind::add, "add", 2, true},
    {OpKind::sub, "sub", 2, false},
    {OpKind::mul, "mul", 2, true},
    {OpKind::div, "div", 2, false},
    {OpKind::abs_diff, "abs_diff", 2, true},
    {OpKind::sqrt, "sqrt", 1, false},
    {OpKind::cbrt, "cbrt", 1, false},
    {OpKind::sq, "sq", 1, false},
    {OpKind::cb, "cb", 1, false},
    {OpKind::six_pow, "six_pow", 1, false},
    {OpKind::inv, "inv", 1, false},
    {OpKind::log, "log", 1, false},
    {OpKind::exp, "exp", 1, false},
    {OpKind::neg_exp, "neg_exp", 1, false},
    {OpKind::abs, "abs", 1, false},
    {OpKind::sin, "sin", 1, false},
    {OpKind::cos, "cos", 1, false},
}};

constexpr std::string_view kNameList =
    "add, sub, mul, div, abs_diff, sqrt, cbrt, sq, cb, six_pow, inv, log, exp, neg_exp, abs, sin, "
    "cos";

enum class UnitCheck { ok, mismatched, needs_dimensionless };

UnitCheck check_units(OpKind kind, std::span<const Unit> u, Unit& out) {
  switch (kind) {
    case OpKind::add:
    case OpKind::sub:
    case OpKind::abs_diff:
      if (u[0] != u[1]) return UnitCheck::mismatched;
      out = u[0];
      return UnitCheck::ok;
    case OpKind::mul: out = u[0] * u[1]; return UnitCheck::ok;
    case OpKind::div: out = u[0] / u[1]; return UnitCheck::ok;
    case OpKind::sqrt: out = u[0].pow(Rational(1, 2)); return UnitCheck::ok;
    case OpKind::cbrt: out = u[0].pow(Rational(1, 3)); return UnitCheck::ok;
    case OpKind::sq: out = u[0].pow(Rational(2)); return UnitCheck::ok;
    case OpKind::cb: out = u[0].pow(Rational(3)); return UnitCheck::ok;
    case OpKind::six_pow: out = u[0].pow(Rational(6)); return UnitCheck::ok;
    case OpKind::inv: out = u[0].pow(Rational(-1)); return UnitCheck::ok;
    case OpKind::abs: out = u[0]; return UnitCheck::ok;
    case OpKind::log:
    case OpKind::exp:
    case OpKind::neg_exp:
    case OpKind::sin:
    case OpKind::cos:
      if (!u[0].dimensionless()) return UnitCheck::needs_dimensionless;
      out = Unit();
      return UnitCheck::ok;
  }
  return UnitCheck::ok;
}

}  // namespace

const Operator& op_info(OpKind kind) noexcept { return kOperators[static_cast<std::size_t>(kind)]; }

const std::array<Operator, kOpKindCount>& all_operators() noexcept { return kOperators; }

std::optional<OpKind> op_from_name(std::string_view name) noexcept {
  for (const auto& op : kOperators) {
    if (op.name == name) return op.kind;
  }
  return std::nullopt;
}

std::string_view operator_name_list() noexcept { return kNameList; }

Unit unit_of(OpKind kind, std::span<const Unit> child_units) {
  const Operator& op = op_info(kind);
  if (child_units.size() != static_cast<std::size_t>(op.arity)) {
    throw std::invalid_argument("unit_of: operator '" + std::string(op.name) + "' expects " +
                                std::to_string(op.arity) + " children");
  }
  Unit out;
  switch (check_units(kind, child_units, out)) {
    case UnitCheck::ok: return out;
    case UnitCheck::mismatched:
      throw UnitError(UnitErrorKind::mismatched_addition,
                      std::string(op.name) + ": units differ ('" + child_units[0].to_string() +
                          "' vs '" + child_units[1].to_string() + "')");
    case UnitCheck::needs_dimensionless:
      throw UnitError(UnitErrorKind::requires_dimensionless,
                      std::string(op.name) + ": argument must be dimensionless, got '" +
                          child_units[0].to_string() + "'");
  }
  return out;
}

std::optional<Unit> try_unit_of(OpKind kind, std::span<const Unit> child_units) {
  if (child_units.size() != static_cast<std::size_t>(op_info(kind).arity)) return std::nullopt;
  Unit out;
  if (check_units(kind, child_units, out) != UnitCheck::ok) return std::nullopt;
  return out;
}

}  // namespace sisso
