// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "sisso/dataset.hpp"

namespace sisso {

/// Planted-model data: primaries x1..xN drawn uniformly from [low, high],
/// property P = a_t * (x1 * x2) + b_t * sqrt(x3) + c_t with per-task
/// coefficients a_t = 2 + t/2, b_t = -3 + t, c_t = 1 + t. x1, x2, x3 carry
/// the units m, s, kg; further primaries cycle through m, s, kg and
/// dimensionless.
struct SyntheticSpec {
  std::size_t n_primaries = 6;
  std::size_t n_samples = 60;
  std::size_t n_tasks = 1;
  std::uint64_t seed = 2024;
  double low = 1.0;
  double high = 10.0;
  /// Relative uniform noise amplitude applied to P (0 = exact).
  double noise = 0.0;
};

Dataset make_synthetic_dataset(const SyntheticSpec& spec);

}  // namespace sisso
