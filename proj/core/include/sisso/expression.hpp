// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sisso/matrix.hpp"
#include "sisso/operators.hpp"
#include "sisso/unit.hpp"

namespace sisso {

enum class Precision { fp32, fp64 };

std::string_view precision_name(Precision p) noexcept;

/// Name and unit of an input column.
struct PrimaryFeature {
  std::string name;
  Unit unit;
};

/// Immutable binary expression tree over primary features.
///
/// Copies share the underlying node, so expressions are cheap to pass around
/// and safe to read from many threads. Rung, unit and canonical key are fixed
/// at construction.
class Expression {
 public:
  static Expression primary(std::size_t index, std::string name, Unit unit);

  /// Throws UnitError when the children's units are incompatible with `op`.
  static Expression apply(OpKind op, const Expression& child);
  static Expression apply(OpKind op, const Expression& lhs, const Expression& rhs);

  /// Builds a node whose unit the caller has already derived with
  /// try_unit_of. Used on the generation hot path.
  static Expression apply_unchecked(OpKind op, std::span<const Expression> children, Unit unit);

  bool is_primary() const noexcept;
  /// Only meaningful for primaries.
  std::size_t primary_index() const noexcept;
  const std::string& primary_name() const noexcept;

  /// Only meaningful for operator nodes.
  OpKind op() const noexcept;
  std::span<const Expression> children() const noexcept;

  int rung() const noexcept;
  const Unit& unit() const noexcept;

  /// Deterministic string identifying the tree up to commutative reordering.
  const std::string& key() const noexcept;

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline const std::string& canonical_key(const Expression& e) noexcept { return e.key(); }

/// Fully parenthesized infix form with primary names, e.g. "(r_A * r_B)",
/// "sqrt(x)", "|a - b|", "(x)^2", "exp(-x)".
std::string render(const Expression& e);

/// Inverse of render. Primary names are resolved against `primaries`; the
/// primary index is the position in that list. Throws ParseError.
Expression parse_expression(std::string_view text, std::span<const PrimaryFeature> primaries);

/// Evaluates `e` on every sample. `primary_values` holds one row per primary
/// feature. Non-finite results are kept as data.
template <typename T>
std::vector<T> evaluate_as(const Expression& e, const Matrix<double>& primary_values);

/// Evaluation in the requested precision, widened to double for the caller.
std::vector<double> evaluate(const Expression& e, const Matrix<double>& primary_values,
                             Precision precision);

}  // namespace sisso
