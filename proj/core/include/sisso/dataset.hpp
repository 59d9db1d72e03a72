// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sisso/expression.hpp"
#include "sisso/matrix.hpp"
#include "sisso/unit.hpp"

namespace sisso {

/// Partition of sample indices into tasks. Tasks are numbered in order of
/// first appearance; every sample belongs to exactly one task.
struct TaskPartition {
  std::vector<std::string> names;
  std::vector<std::uint32_t> task_of;
  std::vector<std::vector<std::size_t>> slices;

  /// One task named "all" covering every sample.
  static TaskPartition single(std::size_t n_samples);
  static TaskPartition from_labels(std::span<const std::string> labels);

  std::size_t n_tasks() const noexcept { return slices.size(); }
  std::size_t n_samples() const noexcept { return task_of.size(); }
  std::size_t smallest_task() const noexcept;
};

struct Dataset {
  std::vector<std::string> sample_ids;
  std::vector<PrimaryFeature> primaries;
  /// One row per primary feature, one column per sample.
  Matrix<double> primary_values;
  std::string property_name;
  Unit property_unit;
  std::vector<double> property;
  /// Empty when the data has no task column.
  std::vector<std::string> task_labels;

  std::size_t n_samples() const noexcept { return property.size(); }
  std::size_t n_primaries() const noexcept { return primaries.size(); }
  TaskPartition tasks() const;
};

/// Split of a header cell "name (unit)" into its parts.
struct HeaderCell {
  std::string name;
  Unit unit;
};

/// Parses "radius (AA)" or "x". Throws UnitParseError / ParseError.
HeaderCell parse_header_cell(std::string_view cell);

/// Parses delimiter separated text. The delimiter is a tab if the header line
/// contains one, a comma otherwise. The first column is the sample id.
/// `task_column` may be empty for single-task data.
Dataset parse_dataset(std::string_view text, std::string_view property_column,
                      std::string_view task_column);

Dataset load_dataset(const std::filesystem::path& path, std::string_view property_column,
                     std::string_view task_column);

/// Header of a data file only, already split into cells.
std::vector<HeaderCell> read_header(const std::filesystem::path& path);

/// Serializes `data` back into comma separated text that parse_dataset
/// reads losslessly.
std::string to_csv(const Dataset& data, std::string_view task_column = "task");

}  // namespace sisso
