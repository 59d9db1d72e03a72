// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "sisso/sisso.hpp"

namespace {

using namespace sisso;

Matrix<double> gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix<double> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = g(rng);
  }
  return m;
}

// args: subspace size, dimension, workers
void BM_L0Search(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const std::size_t n_samples = 200;
  const Matrix<double> f = gaussian(m, n_samples, 1);
  const Matrix<double> p = gaussian(1, n_samples, 2);
  L0Config c;
  c.dimension = static_cast<int>(state.range(1));
  c.workers = static_cast<unsigned>(state.range(2));
  const TaskPartition tasks = TaskPartition::single(n_samples);
  std::uint64_t tuples = 0;
  for (auto _ : state) {
    L0Stats stats;
    benchmark::DoNotOptimize(l0_search(f, p.row(0), tasks, c, &stats));
    tuples += stats.tuples_scored;
  }
  state.counters["tuples/s"] = benchmark::Counter(static_cast<double>(tuples), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_L0Search)->Args({400, 2, 1})->Args({400, 2, 4})->Args({60, 3, 1})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_L0SinglePrecision(benchmark::State& state) {
  const Matrix<double> f = gaussian(400, 200, 1);
  const Matrix<double> p = gaussian(1, 200, 2);
  L0Config c;
  c.dimension = 2;
  c.precision = Precision::fp32;
  const TaskPartition tasks = TaskPartition::single(200);
  for (auto _ : state) benchmark::DoNotOptimize(l0_search(f, p.row(0), tasks, c));
  state.SetItemsProcessed(state.iterations() * 400 * 399 / 2);
}
BENCHMARK(BM_L0SinglePrecision)->Unit(benchmark::kMillisecond);

Dataset bench_data(std::size_t primaries) {
  SyntheticSpec spec;
  spec.n_primaries = primaries;
  spec.n_samples = 200;
  return make_synthetic_dataset(spec);
}

GenerationConfig bench_generation(bool materialize) {
  GenerationConfig g;
  g.operators = {OpKind::add, OpKind::sub, OpKind::mul, OpKind::div, OpKind::sqrt, OpKind::sq};
  g.max_rung = 2;
  g.materialize_last_rung = materialize;
  return g;
}

// args: primaries
void BM_BuildFeatureSpace(benchmark::State& state) {
  const Dataset d = bench_data(static_cast<std::size_t>(state.range(0)));
  const GenerationConfig g = bench_generation(true);
  std::size_t size = 0;
  for (auto _ : state) {
    const FeatureSpace s = build_feature_space(d, g);
    size = s.size();
    benchmark::DoNotOptimize(size);
  }
  state.counters["features"] = static_cast<double>(size);
}
BENCHMARK(BM_BuildFeatureSpace)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SisSelect(benchmark::State& state) {
  const Dataset d = bench_data(8);
  const GenerationConfig g = bench_generation(state.range(0) == 1);
  const FeatureSpace s = build_feature_space(d, g);
  const ScreeningTarget target{{d.property}, d.tasks()};
  const FeatureScan scan = streamed_scan(s, g, 65536);
  for (auto _ : state) benchmark::DoNotOptimize(sis_select(scan, target, 100, SelectedSubspace{}));
}
BENCHMARK(BM_SisSelect)->ArgName("materialized")->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Pearson(benchmark::State& state) {
  const Matrix<double> m = gaussian(2, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(pearson(m.row(0), m.row(1)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Pearson)->Arg(200)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
