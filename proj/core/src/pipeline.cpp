// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <span>

#include "sisso/error.hpp"
#include "sisso/feature_space.hpp"
#include "sisso/model.hpp"

namespace sisso {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

double PhaseTimes::other() const noexcept { return std::max(0.0, total - fc - sis - l0); }

std::string timings_report(const PhaseTimes& t) {
  std::string out;
  char buf[64];
  auto line = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "%s,%.6f\n", name, v);
    out += buf;
  };
  line("FC", t.fc);
  line("SIS", t.sis);
  line("L0", t.l0);
  line("other", t.other());
  line("total", t.total);
  return out;
}

PipelineResult run_pipeline(const RunConfig& config, const Dataset& data) {
  const auto t_start = Clock::now();
  config.check();
  check_against(config, data);

  PipelineResult result;
  const GenerationConfig gen = config.generation_config();

  auto t0 = Clock::now();
  const FeatureSpace pool = build_feature_space(data, gen);
  result.times.fc += seconds_since(t0);
  result.materialized_features = pool.size();

  const TaskPartition tasks = data.tasks();
  ScreeningTarget target{{data.property}, tasks};

  for (int d = 1; d <= config.dimension; ++d) {
    // SIS. Time spent producing streamed features is charged to FC.
    t0 = Clock::now();
    double scoring = 0.0;
    const FeatureScan inner = streamed_scan(pool, gen, gen.value_batch_size);
    FeatureScan timed = [&](const ChunkConsumer& consumer) {
      inner([&](const FeatureChunk& chunk) {
        const auto c0 = Clock::now();
        consumer(chunk);
        scoring += seconds_since(c0);
      });
    };
    std::vector<SelectedFeature> picked =
        sis_select(timed, target, config.sis_select_at(d), result.subspace, config.workers);
    const double sis_wall = seconds_since(t0);
    const bool streamed = pool.top_rung() < gen.max_rung;
    result.times.sis += streamed ? scoring : sis_wall;
    if (streamed) result.times.fc += sis_wall - scoring;
    result.subspace.append(std::move(picked));

    if (result.subspace.size() < static_cast<std::size_t>(d)) {
      throw EmptySpace("subspace has " + std::to_string(result.subspace.size()) +
                       " features, too few for dimension " + std::to_string(d));
    }

    t0 = Clock::now();
    DimensionResult dim;
    dim.dimension = d;
    dim.subspace_size = result.subspace.size();
    dim.models = l0_search(result.subspace, data.property, tasks, config.l0_config(d), &dim.l0_stats);
    result.times.l0 += seconds_since(t0);
    if (dim.models.empty()) {
      throw EmptySpace("every tuple at dimension " + std::to_string(d) + " is rank deficient");
    }

    if (d < config.dimension) {
      const std::size_t k = std::min(config.n_residual, dim.models.size());
      target = residuals(std::span<const Model>(dim.models.data(), k), data);
    }
    result.dimensions.push_back(std::move(dim));
  }
  result.times.total = seconds_since(t_start);
  return result;
}

}  // namespace sisso
