// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sisso/operators.hpp"

namespace sisso {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k); zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Number of n-dimensional models over a subspace of `subspace_size`
/// features, C(subspace_size, dimension).
inline BigInt count_models(std::uint64_t subspace_size, std::uint64_t dimension) {
  return binomial(subspace_size, dimension);
}

/// Upper bound on the number of features `op` alone creates at `rung`,
/// starting from `n_primary` primaries. The pool is cumulative: with M the
/// pool size through rung r-1, a commutative binary operator contributes
/// M(M+1)/2, a non-commutative one M^2 and a unary one M. Validity rules only
/// shrink the true count.
BigInt count_upper_bound(std::uint64_t n_primary, OpKind op, int rung);

/// Same recurrence with every operator of `ops` feeding one shared pool.
BigInt count_upper_bound(std::uint64_t n_primary, std::span<const OpKind> ops, int rung);

/// Lexicographic rank of a strictly increasing index tuple over [0, m).
BigInt rank_combination(std::span<const std::uint32_t> tuple, std::uint64_t m);

/// rank-th strictly increasing tuple of `n` indices from [0, m) in
/// lexicographic order. Throws RankOutOfRange when rank >= C(m, n).
std::vector<std::uint32_t> unrank_combination(const BigInt& rank, std::uint64_t m,
                                              std::uint64_t n);

/// Table of C(i, j) for i <= m, j <= n in 64-bit, saturating at UINT64_MAX.
/// Drives the batched enumeration in the l0 search.
class BinomialTable {
 public:
  BinomialTable(std::uint32_t m, std::uint32_t n);

  std::uint64_t operator()(std::uint32_t i, std::uint32_t j) const noexcept {
    return j > n_ || i > m_ ? 0 : table_[static_cast<std::size_t>(i) * (n_ + 1) + j];
  }
  bool saturated() const noexcept { return saturated_; }

  /// 64-bit unrank into `out` (size n). `rank` must be < C(m, n).
  void unrank(std::uint64_t rank, std::span<std::uint32_t> out) const noexcept;

 private:
  std::uint32_t m_;
  std::uint32_t n_;
  bool saturated_ = false;
  std::vector<std::uint64_t> table_;
};

/// Advances a strictly increasing tuple over [0, m) to its lexicographic
/// successor. Returns false when `tuple` was the last combination.
bool next_combination(std::span<std::uint32_t> tuple, std::uint32_t m) noexcept;

}  // namespace sisso
