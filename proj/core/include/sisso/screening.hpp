// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "sisso/dataset.hpp"
#include "sisso/expression.hpp"
#include "sisso/feature_space.hpp"

namespace sisso {

/// Pearson correlation coefficient, always accumulated in double. Throws
/// DegenerateInput when either vector is constant or shorter than 2.
double pearson(std::span<const double> x, std::span<const double> y);

/// What SIS projects onto: the property for the first dimension, the
/// residuals of the previous dimension's best models afterwards.
struct ScreeningTarget {
  std::vector<std::vector<double>> targets;
  TaskPartition tasks;
};

/// Preprocessed ScreeningTarget. For every target and task the centered
/// target slice and its norm are cached, so scoring a feature costs one pass
/// per task and target.
///
/// score = max over targets of the sample-count weighted mean over tasks of
/// |pearson(feature slice, target slice)|. Slices where either side is
/// constant contribute 0.
class ProjectionScorer {
 public:
  explicit ProjectionScorer(const ScreeningTarget& target);

  double score(std::span<const double> feature) const noexcept;

 private:
  struct TaskTarget {
    std::vector<std::size_t> samples;
    double weight = 0.0;
    std::vector<std::vector<double>> centered;  // per target
    std::vector<double> norm;                   // per target
  };
  std::vector<TaskTarget> tasks_;
  std::size_t n_targets_ = 0;
  bool contiguous_single_ = false;
};

double projection_score(std::span<const double> feature, const ScreeningTarget& target);

struct SelectedFeature {
  Expression expr;
  double score = 0.0;
  std::vector<double> values;
};

/// Accumulated union of the features selected across SIS iterations.
class SelectedSubspace {
 public:
  void append(std::vector<SelectedFeature> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const SelectedFeature& operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const SelectedFeature> entries() const noexcept { return entries_; }
  bool contains(const std::string& key) const { return keys_.contains(key); }

  /// One row per selected feature.
  Matrix<double> values() const;

 private:
  std::vector<SelectedFeature> entries_;
  std::unordered_set<std::string> keys_;
};

/// Callback driving a scan over a feature space; invokes its argument once
/// per chunk. See scan_features.
using FeatureScan = std::function<void(const ChunkConsumer&)>;

FeatureScan materialized_scan(const FeatureSpace& space, std::size_t chunk_size);

/// Materialized rungs of `pool` followed by the on-the-fly last rung.
FeatureScan streamed_scan(const FeatureSpace& pool, const GenerationConfig& config,
                          std::size_t chunk_size);

/// Returns, best first, the n_select highest-scoring features of the scan
/// not yet in `already`. Equal scores are ordered by canonical key. Throws
/// EmptySpace when the scan produced no feature at all.
std::vector<SelectedFeature> sis_select(const FeatureScan& scan, const ScreeningTarget& target,
                                        std::size_t n_select, const SelectedSubspace& already,
                                        unsigned workers = 1);

}  // namespace sisso
