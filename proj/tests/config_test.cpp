// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "sisso/config.hpp"
#include "sisso/error.hpp"

namespace sisso {
namespace {

constexpr const char* kMinimal = R"({"data_file": "d.csv", "property_key": "E"})";

std::string error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

TEST(Config, Defaults) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.data_file, "d.csv");
  EXPECT_EQ(c.dimension, 2);
  EXPECT_EQ(c.generation.max_rung, 1);
  EXPECT_EQ(c.l0.batch_size, 131072u);
  EXPECT_EQ(c.l0.precision, Precision::fp64);
  EXPECT_EQ(c.l0.n_models_store, 10u);
  EXPECT_DOUBLE_EQ(c.generation.min_abs_value, 1e-5);
  EXPECT_DOUBLE_EQ(c.generation.max_abs_value, 1e8);
}

TEST(Config, FullDocument) {
  const RunConfig c = parse_config(R"({
    "data_file": "d.csv", "property_key": "E", "task_key": "group",
    "operators": ["add", "mul", "sqrt", "abs_diff"], "max_rung": 2, "dimension": 3,
    "n_sis_select": 50, "subspace_accounting": "total", "n_residual": 4,
    "min_abs_value": 1e-3, "max_abs_value": 1e5, "materialize_last_rung": false,
    "value_batch_size": 99, "l0_batch_size": 64, "precision": "fp32", "n_models_store": 12,
    "autotune": true, "workers": 3})",
                                   "/base");
  EXPECT_EQ(c.data_file, "/base/d.csv");
  EXPECT_EQ(c.generation.operators,
            (std::vector<OpKind>{OpKind::add, OpKind::mul, OpKind::sqrt, OpKind::abs_diff}));
  EXPECT_EQ(c.subspace_accounting, SubspaceAccounting::total);
  EXPECT_EQ(c.l0.precision, Precision::fp32);
  EXPECT_FALSE(c.generation.materialize_last_rung);
  EXPECT_EQ(c.generation_config().workers, 3u);
  EXPECT_EQ(c.l0_config(2).dimension, 2);
  EXPECT_EQ(parse_config(config_to_json(c)), c);
}

TEST(Config, Errors) {
  EXPECT_EQ(error_key(R"({"data_file": "d.csv"})"), "property_key");
  EXPECT_EQ(error_key(R"({"data_file": "d.csv", "property_key": "E", "bogus": 1})"), "bogus");
  EXPECT_EQ(error_key(R"({"data_file": "d.csv", "property_key": "E", "operators": ["tanh"]})"),
            "operators[0]");
  EXPECT_EQ(error_key(R"({"data_file": "d.csv", "property_key": "E", "max_rung": "2"})"), "max_rung");
  EXPECT_EQ(error_key(R"({"data_file": "d.csv", "property_key": "E", "precision": "fp16"})"), "precision");
  EXPECT_EQ(error_key(R"({"data_file": "d.csv", "property_key": "E", "min_abs_value": 10,
                          "max_abs_value": 1})"),
            "min_abs_value");
  EXPECT_EQ(error_key(R"({"data_file": "d.csv", "property_key": "E", "n_residual": 20,
                          "n_models_store": 5})"),
            "n_models_store");
  EXPECT_EQ(error_key("[1, 2]"), "<document>");
  EXPECT_EQ(error_key("{"), "<document>");
  try {
    parse_config(R"({"data_file": "d.csv", "property_key": "E", "operators": ["tanh"]})");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("abs_diff"), std::string::npos);
  }
}

TEST(Config, SubspaceAccounting) {
  RunConfig c = parse_config(R"({"data_file": "d", "property_key": "E", "n_sis_select": 5000,
                                 "dimension": 3})");
  EXPECT_EQ(c.subspace_size_at(2), 10000u);
  EXPECT_EQ(c.sis_select_at(3), 5000u);
  c.subspace_accounting = SubspaceAccounting::total;
  EXPECT_EQ(c.sis_select_at(1), 1666u);
  EXPECT_EQ(c.sis_select_at(2), 1667u);
  EXPECT_EQ(c.sis_select_at(3), 1667u);
  EXPECT_EQ(c.subspace_size_at(3), 5000u);
}

TEST(Config, DigestIgnoresExecutionSettings) {
  RunConfig a = parse_config(kMinimal);
  RunConfig b = a;
  b.workers = 8;
  b.l0.batch_size = 64;
  b.generation.materialize_last_rung = false;
  EXPECT_EQ(config_digest(a), config_digest(b));
  b.dimension = 3;
  EXPECT_NE(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).size(), 16u);
}

}  // namespace
}  // namespace sisso
