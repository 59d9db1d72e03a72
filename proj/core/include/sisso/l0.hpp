// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sisso/dataset.hpp"
#include "sisso/expression.hpp"
#include "sisso/matrix.hpp"
#include "sisso/screening.hpp"

namespace sisso {

struct L0Config {
  int dimension = 1;
  /// Tuples per batch; the batch is split into inner chunks claimed by workers.
  std::size_t batch_size = 131072;
  Precision precision = Precision::fp64;
  std::size_t n_models_store = 10;
  bool autotune = false;
  /// Inner chunk sizes the autotuner times on the first batch.
  std::vector<std::size_t> chunk_candidates{256, 1024, 4096};
  /// Inner chunk size used when autotune is off.
  std::size_t chunk_size = 1024;
  unsigned workers = 1;

  void check() const;

  friend bool operator==(const L0Config&, const L0Config&) = default;
};

/// Linear model over a descriptor: per task, property ~ c . features + intercept.
struct Model {
  /// Strictly increasing indices into the subspace the model was found in.
  std::vector<std::uint32_t> tuple;
  std::vector<Expression> descriptor;
  std::vector<std::string> task_names;
  std::vector<std::size_t> task_sizes;
  /// One row per task: dimension coefficients followed by the intercept.
  Matrix<double> coefficients;
  /// Residual sum of squares over all samples divided by the sample count.
  double mse = std::numeric_limits<double>::infinity();
  std::vector<double> rmse_per_task;
  bool rank_deficient = false;

  std::size_t dimension() const noexcept {
    return coefficients.cols() == 0 ? tuple.size() : coefficients.cols() - 1;
  }
};

/// Least-squares fit of one tuple by Householder QR, separately per task.
/// A tuple whose R factor has |R(k,k)| < tol * max |R(k,k)| (tol 1e-10 in
/// fp64, 1e-5 in fp32) in any task is flagged rank_deficient and scored
/// +infinity.
Model fit_tuple(std::span<const std::uint32_t> tuple, const Matrix<double>& features,
                std::span<const double> property, const TaskPartition& tasks,
                Precision precision);

struct L0Stats {
  std::uint64_t tuples_scored = 0;
  std::size_t chunk_size = 0;
  double seconds = 0.0;
};

/// Scores all C(m, dimension) tuples of the rows of `features` and returns
/// the best n_models_store models by ascending MSE, ties broken by the
/// lexicographically smaller tuple. Rank deficient tuples never appear in
/// the result. Output does not depend on batch size, chunk size or workers.
std::vector<Model> l0_search(const Matrix<double>& features, std::span<const double> property,
                             const TaskPartition& tasks, const L0Config& config,
                             L0Stats* stats = nullptr);

/// Same search over a SIS subspace; fills Model::descriptor.
std::vector<Model> l0_search(const SelectedSubspace& subspace, std::span<const double> property,
                             const TaskPartition& tasks, const L0Config& config,
                             L0Stats* stats = nullptr);

/// Times ranks [first_begin, first_end) once per candidate inner chunk size
/// and returns the fastest candidate. Never affects search results.
std::size_t autotune_chunk(const Matrix<double>& features, std::span<const double> property,
                           const TaskPartition& tasks, const L0Config& config,
                           std::uint64_t first_begin, std::uint64_t first_end);

}  // namespace sisso
