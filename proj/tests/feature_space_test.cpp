// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sisso/error.hpp"
#include "sisso/feature_space.hpp"
#include "test_data.hpp"

namespace sisso {
namespace {

using testing_data::make;

GenerationConfig config_with(std::vector<OpKind> ops, int rung) {
  GenerationConfig c;
  c.operators = std::move(ops);
  c.max_rung = rung;
  return c;
}

std::vector<std::string> keys_of(const FeatureSpace& s, std::size_t begin = 0) {
  std::vector<std::string> out;
  for (std::size_t i = begin; i < s.size(); ++i) out.push_back(s.feature(i).key());
  return out;
}

TEST(Validity, Rules) {
  const GenerationConfig c = config_with({}, 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(validate_values(std::vector<double>{1, 2, nan}, c), Validity::non_finite);
  EXPECT_EQ(validate_values(std::vector<double>{5, 5, 5}, c), Validity::constant);
  EXPECT_EQ(validate_values(std::vector<double>{1, 1e9}, c), Validity::above_max);
  EXPECT_EQ(validate_values(std::vector<double>{1e-6, -2e-6}, c), Validity::below_min);
  EXPECT_EQ(validate_values(std::vector<double>{1, 2}, c), Validity::valid);
}

TEST(Pairs, CommutativeOncePerUnorderedPair) {
  const Dataset d = make({{1, 2}, {2, 5}}, {});
  const auto pool = FeatureSpace::from_primaries(d, config_with({}, 1));
  const auto list = generate_pairs(OpKind::mul, pool, 1);
  EXPECT_EQ(list.pairs, (std::vector<CandidatePair>{{0, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(generate_pairs(OpKind::div, pool, 1).pairs.size(), 4u);
}

TEST(Pairs, UnitsAndZeroDivisors) {
  const Dataset d = make({{1, 2}, {2, 5}}, {Unit::base("m"), Unit::base("s")});
  const auto pool = FeatureSpace::from_primaries(d, config_with({}, 1));
  EXPECT_EQ(generate_pairs(OpKind::add, pool, 1).pairs, (std::vector<CandidatePair>{{0, 0}, {1, 1}}));

  const Dataset z = make({{1, 2, 3}, {0, 1, 2}}, {});
  const auto zpool = FeatureSpace::from_primaries(z, config_with({}, 1));
  for (const auto& p : generate_pairs(OpKind::div, zpool, 1).pairs) EXPECT_NE(p.second, 1u);
  EXPECT_EQ(generate_pairs(OpKind::div, zpool, 1).pairs.size(), 2u);
}

TEST(Pairs, RungCondition) {
  const Dataset d = make({{1, 2}, {2, 5}}, {});
  const auto space = build_feature_space(d, config_with({OpKind::mul}, 1));
  ASSERT_EQ(space.size(), 5u);
  const auto list = generate_pairs(OpKind::mul, space, 2);
  for (const auto& p : list.pairs) {
    EXPECT_TRUE(space.feature(p.first).rung() == 1 || space.feature(p.second).rung() == 1);
    EXPECT_LE(p.first, p.second);
  }
  // 3 rung-1 features pair among themselves (6) and with 2 primaries (6).
  EXPECT_EQ(list.pairs.size(), 12u);
}

TEST(GenerateRung, Examples) {
  const Dataset d = make({{1, 2}, {2, 4}}, {});
  const auto s = build_feature_space(d, config_with({OpKind::mul}, 1));
  EXPECT_EQ(s.size() - s.rung_begin(1), 3u);

  const Dataset a = make({{1, 2}}, {});
  EXPECT_EQ(build_feature_space(a, config_with({OpKind::abs}, 1)).size(), 1u);

  const auto empty = build_feature_space(d, config_with({}, 2));
  EXPECT_EQ(empty.size(), 2u);
}

TEST(GenerateRung, DropsBadAndDuplicatePrimaries) {
  const Dataset d = make({{1, 2}, {3, 3}, {1, 2}}, {});
  const auto s = FeatureSpace::from_primaries(d, config_with({}, 0));
  EXPECT_EQ(s.size(), 1u);
}

TEST(GenerateRung, CapacityError) {
  const Dataset d = make(testing_data::uniform_columns(6, 50, 1), {});
  auto c = config_with({OpKind::mul, OpKind::div}, 2);
  c.memory_budget_bytes = 1024;
  EXPECT_THROW(build_feature_space(d, c), CapacityError);
  c.materialize_last_rung = false;
  c.memory_budget_bytes = 1 << 20;
  EXPECT_NO_THROW(build_feature_space(d, c));
}

class SpaceFixture : public ::testing::Test {
 protected:
  Dataset data = make(testing_data::uniform_columns(4, 12, 7),
                      {Unit::base("m"), Unit::base("m"), Unit::base("s"), Unit()});
  GenerationConfig config = config_with({OpKind::add, OpKind::mul, OpKind::div, OpKind::sqrt}, 2);
};

TEST_F(SpaceFixture, ChunkAndWorkerInvariance) {
  const auto ref = keys_of(build_feature_space(data, config));
  for (std::size_t batch : {1u, 7u, 1000000u}) {
    for (unsigned w : {1u, 3u}) {
      auto c = config;
      c.value_batch_size = batch;
      c.workers = w;
      const auto s = build_feature_space(data, c);
      EXPECT_EQ(keys_of(s), ref) << batch << " " << w;
    }
  }
}

TEST_F(SpaceFixture, StreamedMatchesMaterialized) {
  const auto full = build_feature_space(data, config);
  auto c = config;
  c.materialize_last_rung = false;
  const auto pool = build_feature_space(data, c);
  ASSERT_EQ(pool.top_rung(), 1);
  for (std::size_t batch : {1u, 5u, 1000000u}) {
    c.value_batch_size = batch;
    std::vector<std::string> streamed;
    std::vector<double> values;
    stream_final_rung(pool, c, [&](const FeatureChunk& ch) {
      for (std::size_t i = 0; i < ch.features.size(); ++i) {
        streamed.push_back(ch.features[i].key());
        values.insert(values.end(), ch.row(i).begin(), ch.row(i).end());
      }
    });
    EXPECT_EQ(streamed, keys_of(full, full.rung_begin(2)));
    const auto stored = full.chunk(full.rung_begin(2), full.size()).values;
    ASSERT_EQ(values.size(), stored.size());
    EXPECT_TRUE(std::equal(values.begin(), values.end(), stored.begin()));
  }
  auto zero = c;
  zero.max_rung = 0;
  bool called = false;
  stream_final_rung(FeatureSpace::from_primaries(data, zero), zero,
                    [&](const FeatureChunk&) { called = true; });
  EXPECT_FALSE(called);
}

TEST_F(SpaceFixture, StoredFeaturesAreSoundAndDistinct) {
  const auto s = build_feature_space(data, config);
  std::set<std::string> keys;
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(validate_values(s.values(i), config), Validity::valid);
    EXPECT_TRUE(keys.insert(s.feature(i).key()).second);
    const auto re = evaluate(s.feature(i), data.primary_values, Precision::fp64);
    EXPECT_TRUE(std::equal(re.begin(), re.end(), s.values(i).begin())) << render(s.feature(i));
    const std::vector<double> vi(s.values(i).begin(), s.values(i).end());
    for (std::size_t j = 0; j < i; ++j) {
      const std::vector<double> vj(s.values(j).begin(), s.values(j).end());
      EXPECT_FALSE(oracle::tree_same(vi, vj, config.dedup_tolerance));
      EXPECT_FALSE(oracle::tree_same(vj, vi, config.dedup_tolerance));
    }
  }
}

std::vector<std::string> op_names(const GenerationConfig& c) {
  std::vector<std::string> out;
  for (OpKind k : c.operators) out.emplace_back(op_info(k).name);
  return out;
}

void expect_matches_oracle(const Dataset& data, const GenerationConfig& config) {
  std::vector<std::vector<double>> prims;
  std::vector<Unit> units;
  for (std::size_t p = 0; p < data.n_primaries(); ++p) {
    const auto r = data.primary_values.row(p);
    prims.emplace_back(r.begin(), r.end());
    units.push_back(data.primaries[p].unit);
  }
  const auto want = oracle::enumerate_trees(
      prims, units, op_names(config), config.max_rung,
      {config.min_abs_value, config.max_abs_value, config.dedup_tolerance});
  const auto got = build_feature_space(data, config);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(got.feature(i).key(), want[i].key);
    EXPECT_EQ(got.feature(i).rung(), want[i].rung);
  }
}

TEST_F(SpaceFixture, MatchesTreeEnumeration) {
  expect_matches_oracle(data, config);
  auto c = config_with({OpKind::mul, OpKind::sqrt, OpKind::div}, 2);
  expect_matches_oracle(data, c);
  // Columns with zeros, negatives and duplicates exercise every filter.
  const Dataset rough = make({{0, 1, 2, 3}, {-1, 1, -2, 2}, {4, 4, 4, 4}, {0, 1, 2, 3}}, {});
  expect_matches_oracle(rough, config);
}

TEST(ValueIndex, FindsNearDuplicatesOnly) {
  ValueIndex idx(3, 1e-10);
  const std::vector<double> a{1, 2, 3};
  idx.insert(idx.probe(a), 0);
  const std::vector<double> near{1 + 1e-12, 2, 3 - 1e-12};
  const std::vector<double> far{1 + 1e-8, 2, 3};
  std::vector<double> scratch(3);
  auto fetch = [&](std::size_t, std::span<double>) { return std::span<const double>(a); };
  EXPECT_TRUE(idx.contains(near, idx.probe(near), fetch, scratch));
  EXPECT_FALSE(idx.contains(far, idx.probe(far), fetch, scratch));
}

}  // namespace
}  // namespace sisso
