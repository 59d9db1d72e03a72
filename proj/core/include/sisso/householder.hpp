// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace sisso::qr {

// Householder QR on a column-major rows x cols matrix held in caller-owned
// scratch, so the l0 inner loop never allocates.
//
// After factorize(), column k below the diagonal (rows k..rows-1, including
// the diagonal slot) holds the Householder vector v_k, the strict upper
// triangle holds R, and diag[k] holds R(k, k). H_k = I - beta_k v_k v_k^T
// with beta_k = 2 / (v_k^T v_k), stored in beta[k] (0 for a zero column).
template <typename T>
void factorize(std::span<T> a, std::size_t rows, std::size_t cols, std::span<T> diag,
               std::span<T> beta) noexcept {
  for (std::size_t k = 0; k < cols; ++k) {
    T* col = a.data() + k * rows;
    T norm2 = 0;
    for (std::size_t i = k; i < rows; ++i) norm2 += col[i] * col[i];
    if (norm2 == T(0)) {
      diag[k] = 0;
      beta[k] = 0;
      continue;
    }
    const T norm = std::sqrt(norm2);
    const T alpha = col[k] > T(0) ? -norm : norm;
    const T v0 = col[k] - alpha;
    // v^T v = norm2 - col[k]^2 + v0^2 = 2 norm (norm + |col[k]|)
    const T vv = norm2 - col[k] * col[k] + v0 * v0;
    col[k] = v0;
    diag[k] = alpha;
    beta[k] = T(2) / vv;
    for (std::size_t j = k + 1; j < cols; ++j) {
      T* cj = a.data() + j * rows;
      T s = 0;
      for (std::size_t i = k; i < rows; ++i) s += col[i] * cj[i];
      s *= beta[k];
      for (std::size_t i = k; i < rows; ++i) cj[i] -= s * col[i];
    }
  }
}

/// y <- Q^T y.
template <typename T>
void apply_qt(std::span<const T> a, std::size_t rows, std::size_t cols, std::span<const T> beta,
              std::span<T> y) noexcept {
  for (std::size_t k = 0; k < cols; ++k) {
    if (beta[k] == T(0)) continue;
    const T* col = a.data() + k * rows;
    T s = 0;
    for (std::size_t i = k; i < rows; ++i) s += col[i] * y[i];
    s *= beta[k];
    for (std::size_t i = k; i < rows; ++i) y[i] -= s * col[i];
  }
}

/// Solves R x = qty[0..cols) in place; returns false on a zero pivot.
template <typename T>
bool back_substitute(std::span<const T> a, std::size_t rows, std::size_t cols,
                     std::span<const T> diag, std::span<T> qty) noexcept {
  for (std::size_t k = cols; k-- > 0;) {
    if (diag[k] == T(0)) return false;
    T s = qty[k];
    for (std::size_t j = k + 1; j < cols; ++j) s -= a[j * rows + k] * qty[j];
    qty[k] = s / diag[k];
  }
  return true;
}

/// |R(k,k)| below rel_tol * max_k |R(k,k)| for some k.
template <typename T>
bool rank_deficient(std::span<const T> diag, std::size_t cols, T rel_tol) noexcept {
  T largest = 0;
  for (std::size_t k = 0; k < cols; ++k) largest = std::max(largest, std::abs(diag[k]));
  if (largest == T(0)) return true;
  for (std::size_t k = 0; k < cols; ++k) {
    if (std::abs(diag[k]) < rel_tol * largest) return true;
  }
  return false;
}

/// Explicit rows x cols thin Q (column-major) from a factorized matrix.
template <typename T>
void form_q(std::span<const T> a, std::size_t rows, std::size_t cols, std::span<const T> beta,
            std::span<T> q) noexcept {
  std::fill(q.begin(), q.end(), T(0));
  for (std::size_t j = 0; j < cols; ++j) {
    T* qj = q.data() + j * rows;
    qj[j] = 1;
    // Q e_j = H_0 H_1 ... H_{cols-1} e_j
    for (std::size_t k = cols; k-- > 0;) {
      if (beta[k] == T(0)) continue;
      const T* col = a.data() + k * rows;
      T s = 0;
      for (std::size_t i = k; i < rows; ++i) s += col[i] * qj[i];
      s *= beta[k];
      for (std::size_t i = k; i < rows; ++i) qj[i] -= s * col[i];
    }
  }
}

}  // namespace sisso::qr
