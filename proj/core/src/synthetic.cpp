// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace sisso {

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.n_primaries < 3) throw std::invalid_argument("synthetic data needs >= 3 primaries");
  if (spec.n_tasks < 1 || spec.n_samples < spec.n_tasks) {
    throw std::invalid_argument("synthetic data needs 1 <= n_tasks <= n_samples");
  }
  std::mt19937_64 rng(spec.seed);
  // Explicit mapping keeps the stream identical across standard libraries.
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  static const char* kUnits[] = {"m", "s", "kg", ""};
  Dataset data;
  data.property_name = "P";
  for (std::size_t p = 0; p < spec.n_primaries; ++p) {
    data.primaries.push_back({"x" + std::to_string(p + 1), parse_unit(kUnits[p % 4])});
  }
  data.primary_values = Matrix<double>(spec.n_primaries, spec.n_samples);
  data.property.resize(spec.n_samples);
  for (std::size_t s = 0; s < spec.n_samples; ++s) {
    data.sample_ids.push_back("s" + std::to_string(s));
    for (std::size_t p = 0; p < spec.n_primaries; ++p) {
      data.primary_values(p, s) = spec.low + (spec.high - spec.low) * uniform();
    }
    const std::size_t t = s * spec.n_tasks / spec.n_samples;
    if (spec.n_tasks > 1) data.task_labels.push_back("t" + std::to_string(t));
    const double a = 2.0 + 0.5 * static_cast<double>(t);
    const double b = -3.0 + static_cast<double>(t);
    const double c = 1.0 + static_cast<double>(t);
    const double x1 = data.primary_values(0, s);
    const double x2 = data.primary_values(1, s);
    const double x3 = data.primary_values(2, s);
    double p = a * (x1 * x2) + b * std::sqrt(x3) + c;
    if (spec.noise > 0.0) p *= 1.0 + spec.noise * (2.0 * uniform() - 1.0);
    data.property[s] = p;
  }
  return data;
}

}  // namespace sisso
