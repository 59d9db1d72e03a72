// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "planted.hpp"
#include "sisso/feature_space.hpp"
#include "sisso/model.hpp"
#include "sisso/synthetic.hpp"

namespace sisso {
namespace {

TEST(Pipeline, RecoversPlantedDescriptor) {
  const Dataset d = planted::data(6);
  const PipelineResult r = run_pipeline(planted::config(), d);
  ASSERT_EQ(r.dimensions.size(), 2u);
  const Model& best = r.dimensions[1].models.front();
  EXPECT_EQ(planted::rendered(best), planted::descriptor());
  EXPECT_LE(best.mse, 1e-16);
  // The 1D residual steers 2D screening to the second term.
  EXPECT_TRUE(r.subspace.contains(best.descriptor[0].key()));
  EXPECT_TRUE(r.subspace.contains(best.descriptor[1].key()));
}

TEST(Pipeline, MultiTaskPlanted) {
  const Dataset d = planted::data(5, 3);
  RunConfig c = planted::config();
  c.task_key = "task";
  const PipelineResult r = run_pipeline(c, d);
  const Model& best = r.dimensions[1].models.front();
  EXPECT_EQ(planted::rendered(best), planted::descriptor());
  ASSERT_EQ(best.coefficients.rows(), 3u);
  for (std::size_t t = 0; t < 3; ++t) {
    const bool first_is_product = render(best.descriptor[0]) == "(x1 * x2)";
    const double a = best.coefficients(t, first_is_product ? 0 : 1);
    EXPECT_NEAR(a, 2.0 + 0.5 * t, 1e-8);
    EXPECT_NEAR(best.coefficients(t, 2), 1.0 + t, 1e-6);
  }
}

TEST(Pipeline, OneDimensionalBestIsExhaustiveBest) {
  SyntheticSpec spec;
  spec.n_primaries = 4;
  spec.noise = 0.05;
  const Dataset d = make_synthetic_dataset(spec);
  RunConfig c = planted::config();
  c.dimension = 1;
  c.n_sis_select = 10;
  const PipelineResult r = run_pipeline(c, d);
  const FeatureSpace all = build_feature_space(d, c.generation_config());
  std::vector<oracle::Vec> feats;
  for (std::size_t i = 0; i < all.size(); ++i) feats.emplace_back(all.values(i).begin(), all.values(i).end());
  const auto want = oracle::brute_force_l0(feats, d.property, 1, {d.tasks().slices});
  EXPECT_EQ(r.dimensions[0].models.front().descriptor[0].key(), all.feature(want.tuple[0]).key());
  EXPECT_NEAR(r.dimensions[0].models.front().mse, static_cast<double>(want.mse), 1e-10 * want.mse);
}

TEST(Pipeline, MseNonIncreasingWithDimension) {
  SyntheticSpec spec;
  spec.n_primaries = 5;
  spec.noise = 0.2;
  const Dataset d = make_synthetic_dataset(spec);
  RunConfig c = planted::config();
  c.dimension = 3;
  c.n_sis_select = 8;
  const PipelineResult r = run_pipeline(c, d);
  for (std::size_t i = 1; i < r.dimensions.size(); ++i) {
    EXPECT_LE(r.dimensions[i].models.front().mse, r.dimensions[i - 1].models.front().mse);
    EXPECT_EQ(r.dimensions[i].subspace_size, 8 * (i + 1));
  }
}

TEST(Pipeline, DeterministicAcrossExecutionSettings) {
  const Dataset d = planted::data(5);
  const RunConfig base = planted::config();
  auto files = [&](const RunConfig& c) {
    const PipelineResult r = run_pipeline(c, d);
    std::string out;
    for (const auto& dim : r.dimensions) out += serialize_models(dim.models, config_digest(c));
    return out;
  };
  const std::string ref = files(base);
  RunConfig c = base;
  c.workers = 3;
  c.l0.batch_size = 7;
  c.generation.value_batch_size = 13;
  EXPECT_EQ(files(c), ref);
  c.generation.materialize_last_rung = false;
  EXPECT_EQ(files(c), ref);
  EXPECT_EQ(files(base), ref);
}

TEST(Pipeline, TimingReportPartitionsTotal) {
  const Dataset d = planted::data(4);
  RunConfig c = planted::config();
  c.generation.materialize_last_rung = false;
  const PipelineResult r = run_pipeline(c, d);
  const PhaseTimes& t = r.times;
  EXPECT_GE(t.fc, 0);
  EXPECT_GE(t.sis, 0);
  EXPECT_GE(t.l0, 0);
  EXPECT_NEAR(t.fc + t.sis + t.l0 + t.other(), t.total, 0.01 * t.total);
  const std::string report = timings_report(t);
  EXPECT_EQ(report.rfind("FC,", 0), 0u);
  EXPECT_NE(report.find("\nSIS,"), std::string::npos);
  EXPECT_NE(report.find("\nL0,"), std::string::npos);
  EXPECT_NE(report.find("\nother,"), std::string::npos);
  EXPECT_NE(report.find("\ntotal,"), std::string::npos);
}

}  // namespace
}  // namespace sisso
