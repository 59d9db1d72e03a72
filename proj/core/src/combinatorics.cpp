// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/combinatorics.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "sisso/error.hpp"

namespace sisso {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

namespace {

BigInt rung_contribution(const BigInt& pool, OpKind op) {
  const Operator& info = op_info(op);
  if (!info.binary()) return pool;
  if (info.commutative) return pool * (pool + 1) / 2;
  return pool * pool;
}

}  // namespace

BigInt count_upper_bound(std::uint64_t n_primary, OpKind op, int rung) {
  const OpKind ops[] = {op};
  return count_upper_bound(n_primary, ops, rung);
}

BigInt count_upper_bound(std::uint64_t n_primary, std::span<const OpKind> ops, int rung) {
  if (rung <= 0) return n_primary;
  BigInt pool = n_primary;
  BigInt last = 0;
  for (int r = 1; r <= rung; ++r) {
    last = 0;
    for (OpKind op : ops) last += rung_contribution(pool, op);
    pool += last;
  }
  return last;
}

BigInt rank_combination(std::span<const std::uint32_t> tuple, std::uint64_t m) {
  const std::uint64_t n = tuple.size();
  BigInt rank = 0;
  std::uint64_t start = 0;
  for (std::uint64_t p = 0; p < n; ++p) {
    for (std::uint64_t c = start; c < tuple[p]; ++c) rank += binomial(m - 1 - c, n - 1 - p);
    start = tuple[p] + 1;
  }
  return rank;
}

std::vector<std::uint32_t> unrank_combination(const BigInt& rank, std::uint64_t m,
                                              std::uint64_t n) {
  if (rank < 0 || rank >= binomial(m, n)) {
    throw RankOutOfRange("rank " + rank.str() + " out of range for C(" + std::to_string(m) + ", " +
                         std::to_string(n) + ")");
  }
  std::vector<std::uint32_t> out(n);
  BigInt rest = rank;
  std::uint64_t c = 0;
  for (std::uint64_t p = 0; p < n; ++p) {
    for (;; ++c) {
      const BigInt block = binomial(m - 1 - c, n - 1 - p);
      if (rest < block) break;
      rest -= block;
    }
    out[p] = static_cast<std::uint32_t>(c);
    ++c;
  }
  return out;
}

BinomialTable::BinomialTable(std::uint32_t m, std::uint32_t n)
    : m_(m), n_(n), table_(static_cast<std::size_t>(m + 1) * (n + 1), 0) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t i = 0; i <= m; ++i) {
    for (std::uint32_t j = 0; j <= n && j <= i; ++j) {
      std::uint64_t v;
      if (j == 0 || j == i) {
        v = 1;
      } else {
        const std::uint64_t a = (*this)(i - 1, j - 1);
        const std::uint64_t b = (*this)(i - 1, j);
        v = (a > kMax - b) ? kMax : a + b;
        if (v == kMax) saturated_ = true;
      }
      table_[static_cast<std::size_t>(i) * (n + 1) + j] = v;
    }
  }
}

void BinomialTable::unrank(std::uint64_t rank, std::span<std::uint32_t> out) const noexcept {
  const std::uint32_t n = static_cast<std::uint32_t>(out.size());
  std::uint32_t c = 0;
  for (std::uint32_t p = 0; p < n; ++p) {
    for (;; ++c) {
      const std::uint64_t block = (*this)(m_ - 1 - c, n - 1 - p);
      if (rank < block) break;
      rank -= block;
    }
    out[p] = c++;
  }
}

bool next_combination(std::span<std::uint32_t> tuple, std::uint32_t m) noexcept {
  const std::size_t n = tuple.size();
  for (std::size_t p = n; p-- > 0;) {
    if (tuple[p] < m - n + p) {
      ++tuple[p];
      for (std::size_t q = p + 1; q < n; ++q) tuple[q] = tuple[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace sisso
