// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sisso/dataset.hpp"
#include "sisso/l0.hpp"
#include "sisso/screening.hpp"

namespace sisso {

/// Per-sample prediction from precomputed descriptor values (one row per
/// descriptor feature).
std::vector<double> predict(const Model& model, const Matrix<double>& descriptor_values,
                            const TaskPartition& tasks);

/// Evaluates the descriptor expressions on `data` in double precision.
std::vector<double> predict(const Model& model, const Dataset& data);

/// One residual vector, property - prediction, per model; always fp64.
ScreeningTarget residuals(std::span<const Model> models, const Dataset& data);

/// Parsed form of a model record.
struct ModelRecord {
  struct Task {
    std::string name;
    std::size_t n_samples = 0;
    double rmse = 0.0;
    std::vector<double> coefficients;  // dimension values, then the intercept
  };
  std::size_t dimension = 0;
  std::size_t rank = 0;
  double mse = 0.0;
  std::string config_digest;
  std::vector<std::string> features;  // rendered expressions
  std::vector<Task> tasks;
};

/// Text record of one model. Values are printed with 17 significant digits
/// so parsing restores them bit for bit:
///
///   model <rank>
///   dimension <n>
///   mse <value>
///   config_digest <hex>
///   feature <rendered expression>        (n lines)
///   task <name> <n_samples> <rmse> <c_1> ... <c_n> <intercept>   (per task)
///   end
std::string serialize_model(const Model& model, std::size_t rank, std::string_view config_digest);

/// All models of one dimension, in order, as consecutive records.
std::string serialize_models(std::span<const Model> models, std::string_view config_digest);

/// Parses every record in `text`. Throws ParseError.
std::vector<ModelRecord> parse_model_records(std::string_view text);

/// Rebuilds a Model from a record, re-parsing the rendered expressions
/// against the dataset's primaries. The tuple is left empty.
Model model_from_record(const ModelRecord& record, std::span<const PrimaryFeature> primaries);

}  // namespace sisso
