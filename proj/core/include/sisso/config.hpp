// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "sisso/dataset.hpp"
#include "sisso/feature_space.hpp"
#include "sisso/l0.hpp"

namespace sisso {

/// How n_sis_select is counted: features added per SIS iteration, or the
/// size the accumulated subspace reaches at the final dimension.
enum class SubspaceAccounting { per_iteration, total };

/// Everything a run needs. Loaded from a JSON document whose top-level keys
/// are listed in config.cpp; every key except data_file and property_key
/// has a default.
struct RunConfig {
  std::filesystem::path data_file;
  std::string property_key;
  std::string task_key;

  GenerationConfig generation;
  int dimension = 2;
  std::size_t n_sis_select = 100;
  SubspaceAccounting subspace_accounting = SubspaceAccounting::per_iteration;
  std::size_t n_residual = 1;
  L0Config l0;
  unsigned workers = 1;

  /// Cross-field checks. Throws ConfigError.
  void check() const;

  /// Features SIS adds at dimension d (1-based).
  std::size_t sis_select_at(int d) const noexcept;
  /// Accumulated subspace size after the SIS step of dimension d.
  std::size_t subspace_size_at(int d) const noexcept;

  /// Copies of the module configs with the shared fields (workers,
  /// dimension) propagated.
  GenerationConfig generation_config() const;
  L0Config l0_config(int d) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string_view accounting_name(SubspaceAccounting a) noexcept;

/// Parses a JSON config document. Relative data_file paths are resolved
/// against `base_dir`. Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

/// JSON text with every key spelled out; parse_config reads it back to an
/// equal RunConfig.
std::string config_to_json(const RunConfig& config);

/// Hex digest of the settings that affect results. Execution-only settings
/// (workers, batch and chunk sizes, autotune, memory budget) are excluded,
/// so model files are comparable across them.
std::string config_digest(const RunConfig& config);

/// Checks config against loaded data: every task needs at least
/// dimension + 2 samples. Throws ConfigError.
void check_against(const RunConfig& config, const Dataset& data);

}  // namespace sisso
