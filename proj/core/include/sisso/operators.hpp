// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "sisso/unit.hpp"

namespace sisso {

enum class OpKind {
  add,
  sub,
  mul,
  div,
  abs_diff,
  sqrt,
  cbrt,
  sq,
  cb,
  six_pow,
  inv,
  log,
  exp,
  neg_exp,
  abs,
  sin,
  cos,
};

inline constexpr std::size_t kOpKindCount = 17;

/// Static description of an operator kind.
struct Operator {
  OpKind kind;
  std::string_view name;
  int arity;
  bool commutative;

  bool binary() const noexcept { return arity == 2; }
  friend bool operator==(const Operator& a, const Operator& b) noexcept { return a.kind == b.kind; }
};

const Operator& op_info(OpKind kind) noexcept;
const std::array<Operator, kOpKindCount>& all_operators() noexcept;

/// Looks up an operator by its configuration name ("add", "neg_exp", ...).
std::optional<OpKind> op_from_name(std::string_view name) noexcept;

/// Comma separated list of every valid operator name.
std::string_view operator_name_list() noexcept;

/// Unit of `kind` applied to children of the given units. Throws UnitError.
Unit unit_of(OpKind kind, std::span<const Unit> child_units);

/// Same rules as unit_of, returning nullopt instead of throwing.
std::optional<Unit> try_unit_of(OpKind kind, std::span<const Unit> child_units);

// Elementwise kernels. Shared by expression evaluation and feature generation
// so both routes produce bitwise-identical values.

template <typename T>
inline T apply_scalar(OpKind kind, T a, T b) noexcept {
  switch (kind) {
    case OpKind::add: return a + b;
    case OpKind::sub: return a - b;
    case OpKind::mul: return a * b;
    case OpKind::div: return a / b;
    case OpKind::abs_diff: return std::abs(a - b);
    case OpKind::sqrt: return std::sqrt(a);
    case OpKind::cbrt: return std::cbrt(a);
    case OpKind::sq: return a * a;
    case OpKind::cb: return a * a * a;
    case OpKind::six_pow: {
      const T c = a * a * a;
      return c * c;
    }
    case OpKind::inv: return T(1) / a;
    case OpKind::log: return std::log(a);
    case OpKind::exp: return std::exp(a);
    case OpKind::neg_exp: return std::exp(-a);
    case OpKind::abs: return std::abs(a);
    case OpKind::sin: return std::sin(a);
    case OpKind::cos: return std::cos(a);
  }
  return a;
}

template <typename T, OpKind K>
inline void apply_loop(std::span<const T> a, std::span<const T> b, std::span<T> out) noexcept {
  const std::size_t n = out.size();
  if (b.empty()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = apply_scalar<T>(K, a[i], T(0));
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = apply_scalar<T>(K, a[i], b[i]);
  }
}

/// out[i] = op(a[i], b[i]); `b` is ignored (may be empty) for unary kinds.
template <typename T>
void apply_op(OpKind kind, std::span<const T> a, std::span<const T> b, std::span<T> out) noexcept {
  switch (kind) {
#define SISSO_OP_CASE(k) \
  case OpKind::k: apply_loop<T, OpKind::k>(a, b, out); return;
    SISSO_OP_CASE(add)
    SISSO_OP_CASE(sub)
    SISSO_OP_CASE(mul)
    SISSO_OP_CASE(div)
    SISSO_OP_CASE(abs_diff)
    SISSO_OP_CASE(sqrt)
    SISSO_OP_CASE(cbrt)
    SISSO_OP_CASE(sq)
    SISSO_OP_CASE(cb)
    SISSO_OP_CASE(six_pow)
    SISSO_OP_CASE(inv)
    SISSO_OP_CASE(log)
    SISSO_OP_CASE(exp)
    SISSO_OP_CASE(neg_exp)
    SISSO_OP_CASE(abs)
    SISSO_OP_CASE(sin)
    SISSO_OP_CASE(cos)
#undef SISSO_OP_CASE
  }
}

}  // namespace sisso
