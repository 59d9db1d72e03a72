// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sisso/config.hpp"
#include "sisso/dataset.hpp"
#include "sisso/l0.hpp"
#include "sisso/screening.hpp"

namespace sisso {

/// Wall-clock seconds per phase. FC covers feature creation including
/// on-the-fly evaluation of the last rung during SIS scans.
struct PhaseTimes {
  double fc = 0.0;
  double sis = 0.0;
  double l0 = 0.0;
  double total = 0.0;

  double other() const noexcept;
};

/// "phase,seconds" lines for FC, SIS, L0, other and total.
std::string timings_report(const PhaseTimes& times);

struct DimensionResult {
  int dimension = 0;
  std::size_t subspace_size = 0;
  std::vector<Model> models;
  L0Stats l0_stats;
};

struct PipelineResult {
  std::vector<DimensionResult> dimensions;
  SelectedSubspace subspace;
  /// Materialized features (all rungs up to max_rung or max_rung - 1).
  std::size_t materialized_features = 0;
  PhaseTimes times;
};

/// Feature creation, then for d = 1..dimension: SIS against the property or
/// the residuals of the best n_residual models of d - 1, l0 search over the
/// accumulated subspace, residuals for the next round.
PipelineResult run_pipeline(const RunConfig& config, const Dataset& data);

}  // namespace sisso
