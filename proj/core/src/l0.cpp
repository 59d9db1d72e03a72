// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/l0.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <type_traits>

#include "sisso/combinatorics.hpp"
#include "sisso/error.hpp"
#include "sisso/householder.hpp"
#include "sisso/parallel.hpp"

namespace sisso {

void L0Config::check() const {
  if (dimension < 1) throw ConfigError("dimension", "must be >= 1");
  if (batch_size < 1) throw ConfigError("l0_batch_size", "must be >= 1");
  if (n_models_store < 1) throw ConfigError("n_models_store", "must be >= 1");
  if (chunk_size < 1) throw ConfigError("l0_chunk_size", "must be >= 1");
  if (chunk_candidates.empty()) throw ConfigError("l0_chunk_candidates", "must not be empty");
  for (std::size_t c : chunk_candidates) {
    if (c < 1) throw ConfigError("l0_chunk_candidates", "entries must be >= 1");
  }
}

namespace {

/// Feature values and property regrouped so each task is a contiguous
/// range, converted once to the working precision.
template <typename T>
class TupleKernel {
 public:
  TupleKernel(const Matrix<double>& features, std::span<const double> property,
              const TaskPartition& tasks)
      : n_features_(features.rows()), n_samples_(property.size()) {
    if (features.cols() != property.size() || tasks.n_samples() != property.size()) {
      throw std::invalid_argument("l0: features, property and tasks disagree on sample count");
    }
    order_.reserve(n_samples_);
    offsets_.push_back(0);
    for (const auto& slice : tasks.slices) {
      order_.insert(order_.end(), slice.begin(), slice.end());
      offsets_.push_back(order_.size());
      max_rows_ = std::max(max_rows_, slice.size());
    }
    values_.resize(n_features_ * n_samples_);
    for (std::size_t f = 0; f < n_features_; ++f) {
      const auto row = features.row(f);
      for (std::size_t i = 0; i < n_samples_; ++i) {
        values_[f * n_samples_ + i] = static_cast<T>(row[order_[i]]);
      }
    }
    y_.resize(n_samples_);
    for (std::size_t i = 0; i < n_samples_; ++i) y_[i] = static_cast<T>(property[order_[i]]);
  }

  struct Scratch {
    std::vector<T> a;
    std::vector<T> y;
    std::vector<T> diag;
    std::vector<T> beta;
  };

  Scratch make_scratch(std::size_t dimension) const {
    const std::size_t cols = dimension + 1;
    return Scratch{std::vector<T>(max_rows_ * cols), std::vector<T>(max_rows_),
                   std::vector<T>(cols), std::vector<T>(cols)};
  }

  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t n_tasks() const noexcept { return offsets_.size() - 1; }
  std::size_t task_rows(std::size_t t) const noexcept { return offsets_[t + 1] - offsets_[t]; }

  /// Fused assemble / factorize / solve / score. Returns the pooled MSE,
  /// +inf when rank deficient. `coef` (n_tasks x (n+1)) and `task_ss`
  /// are filled when non-null.
  double score(std::span<const std::uint32_t> tuple, Scratch& s, Matrix<double>* coef,
               std::vector<double>* task_ss) const noexcept {
    const std::size_t n = tuple.size();
    const std::size_t cols = n + 1;
    constexpr T rel_tol = std::is_same_v<T, float> ? T(1e-5) : T(1e-10);
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < offsets_.size(); ++t) {
      const std::size_t off = offsets_[t];
      const std::size_t rows = offsets_[t + 1] - off;
      T* a = s.a.data();
      for (std::size_t j = 0; j < n; ++j) {
        const T* src = values_.data() + static_cast<std::size_t>(tuple[j]) * n_samples_ + off;
        std::copy(src, src + rows, a + j * rows);
      }
      std::fill(a + n * rows, a + cols * rows, T(1));
      std::copy(y_.data() + off, y_.data() + off + rows, s.y.data());

      const std::span<T> aspan(a, rows * cols);
      qr::factorize<T>(aspan, rows, cols, s.diag, s.beta);
      if (qr::rank_deficient<T>(s.diag, cols, rel_tol)) return std::numeric_limits<double>::infinity();
      const std::span<T> y(s.y.data(), rows);
      qr::apply_qt<T>(aspan, rows, cols, s.beta, y);
      double ss = 0.0;
      for (std::size_t i = cols; i < rows; ++i) ss += static_cast<double>(y[i]) * static_cast<double>(y[i]);
      total += ss;
      if (task_ss) (*task_ss)[t] = ss;
      if (coef) {
        qr::back_substitute<T>(aspan, rows, cols, s.diag, y);
        for (std::size_t j = 0; j < cols; ++j) (*coef)(t, j) = static_cast<double>(y[j]);
      }
    }
    return total / static_cast<double>(n_samples_);
  }

 private:
  std::size_t n_features_;
  std::size_t n_samples_;
  std::size_t max_rows_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> offsets_;
  std::vector<T> values_;
  std::vector<T> y_;
};

struct Ranked {
  double score;
  std::uint64_t rank;
};

// Worst on top of the heap: larger score, then larger rank.
bool ranked_less(const Ranked& a, const Ranked& b) noexcept {
  if (a.score != b.score) return a.score < b.score;
  return a.rank < b.rank;
}

class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}
  void offer(Ranked r) {
    if (heap_.size() < k_) {
      heap_.push_back(r);
      std::push_heap(heap_.begin(), heap_.end(), ranked_less);
    } else if (ranked_less(r, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), ranked_less);
      heap_.back() = r;
      std::push_heap(heap_.begin(), heap_.end(), ranked_less);
    }
  }
  const std::vector<Ranked>& items() const noexcept { return heap_; }

 private:
  std::size_t k_;
  std::vector<Ranked> heap_;
};

template <typename T>
class Search {
 public:
  Search(const TupleKernel<T>& kernel, const L0Config& config)
      : kernel_(kernel),
        config_(config),
        n_(static_cast<std::uint32_t>(config.dimension)),
        m_(static_cast<std::uint32_t>(kernel.n_features())),
        table_(m_, n_),
        workers_(resolve_workers(config.workers)) {
    if (table_.saturated()) throw CapacityError("l0: C(m, n) does not fit in 64 bits");
    total_ = table_(m_, n_);
    for (unsigned w = 0; w < workers_; ++w) scratch_.push_back(kernel_.make_scratch(n_));
  }

  std::uint64_t total() const noexcept { return total_; }

  void run_range(std::uint64_t begin, std::uint64_t end, std::size_t chunk, std::vector<TopK>& heaps) {
    if (end <= begin) return;
    const std::uint64_t n_chunks = (end - begin + chunk - 1) / chunk;
    parallel_for(static_cast<std::size_t>(n_chunks), workers_, [&](std::size_t c, unsigned w) {
      const std::uint64_t lo = begin + c * chunk;
      const std::uint64_t hi = std::min<std::uint64_t>(end, lo + chunk);
      std::vector<std::uint32_t> tuple(n_);
      table_.unrank(lo, tuple);
      auto& s = scratch_[w];
      for (std::uint64_t r = lo; r < hi; ++r) {
        const double score = kernel_.score(tuple, s, nullptr, nullptr);
        if (std::isfinite(score)) heaps[w].offer({score, r});
        next_combination(tuple, m_);
      }
    });
  }

  std::vector<TopK> fresh_heaps() const {
    return std::vector<TopK>(workers_, TopK(config_.n_models_store));
  }

  std::vector<std::uint32_t> tuple_at(std::uint64_t rank) const {
    std::vector<std::uint32_t> t(n_);
    table_.unrank(rank, t);
    return t;
  }

  std::size_t autotune(std::uint64_t begin, std::uint64_t end) {
    std::size_t best = config_.chunk_candidates.front();
    double best_time = std::numeric_limits<double>::infinity();
    for (std::size_t c : config_.chunk_candidates) {
      auto heaps = fresh_heaps();
      const auto t0 = std::chrono::steady_clock::now();
      run_range(begin, end, c, heaps);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (dt < best_time) {
        best_time = dt;
        best = c;
      }
    }
    return best;
  }

 private:
  const TupleKernel<T>& kernel_;
  const L0Config& config_;
  std::uint32_t n_;
  std::uint32_t m_;
  BinomialTable table_;
  unsigned workers_;
  std::uint64_t total_ = 0;
  std::vector<typename TupleKernel<T>::Scratch> scratch_;
};

template <typename T>
Model fit_with(const TupleKernel<T>& kernel, std::span<const std::uint32_t> tuple,
               const TaskPartition& tasks) {
  Model m;
  m.tuple.assign(tuple.begin(), tuple.end());
  m.task_names = tasks.names;
  for (const auto& s : tasks.slices) m.task_sizes.push_back(s.size());
  m.coefficients = Matrix<double>(kernel.n_tasks(), tuple.size() + 1);
  std::vector<double> ss(kernel.n_tasks(), 0.0);
  auto scratch = kernel.make_scratch(tuple.size());
  m.mse = kernel.score(tuple, scratch, &m.coefficients, &ss);
  m.rank_deficient = !std::isfinite(m.mse);
  if (m.rank_deficient) {
    m.coefficients = Matrix<double>(kernel.n_tasks(), tuple.size() + 1,
                                    std::numeric_limits<double>::quiet_NaN());
    m.rmse_per_task.assign(kernel.n_tasks(), std::numeric_limits<double>::infinity());
    return m;
  }
  for (std::size_t t = 0; t < kernel.n_tasks(); ++t) {
    m.rmse_per_task.push_back(std::sqrt(ss[t] / static_cast<double>(kernel.task_rows(t))));
  }
  return m;
}

void check_tuple(std::span<const std::uint32_t> tuple, std::size_t m) {
  if (tuple.empty()) throw std::invalid_argument("fit_tuple: empty tuple");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= m || (i > 0 && tuple[i] <= tuple[i - 1])) {
      throw std::invalid_argument("fit_tuple: tuple must be strictly increasing and in range");
    }
  }
}

void check_task_sizes(const TaskPartition& tasks, std::size_t dimension) {
  for (std::size_t t = 0; t < tasks.n_tasks(); ++t) {
    if (tasks.slices[t].size() < dimension + 2) {
      throw std::invalid_argument("l0: task '" + tasks.names[t] + "' has " +
                                  std::to_string(tasks.slices[t].size()) +
                                  " samples, needs at least dimension + 2");
    }
  }
}

template <typename T>
std::vector<Model> search_with(const Matrix<double>& features, std::span<const double> property,
                               const TaskPartition& tasks, const L0Config& config,
                               L0Stats* stats) {
  const auto t0 = std::chrono::steady_clock::now();
  const TupleKernel<T> kernel(features, property, tasks);
  Search<T> search(kernel, config);
  const std::uint64_t total = search.total();
  const std::uint64_t batch = config.batch_size;

  std::size_t chunk = config.chunk_size;
  if (config.autotune && total > 0) {
    chunk = search.autotune(0, std::min<std::uint64_t>(batch, total));
  }

  auto heaps = search.fresh_heaps();
  for (std::uint64_t begin = 0; begin < total; begin += batch) {
    search.run_range(begin, std::min<std::uint64_t>(total, begin + batch), chunk, heaps);
  }

  std::vector<Ranked> merged;
  for (const auto& h : heaps) merged.insert(merged.end(), h.items().begin(), h.items().end());
  std::sort(merged.begin(), merged.end(), ranked_less);
  if (merged.size() > config.n_models_store) merged.resize(config.n_models_store);

  std::vector<Model> out;
  out.reserve(merged.size());
  for (const auto& r : merged) out.push_back(fit_with(kernel, search.tuple_at(r.rank), tasks));

  if (stats) {
    stats->tuples_scored = total;
    stats->chunk_size = chunk;
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

}  // namespace

Model fit_tuple(std::span<const std::uint32_t> tuple, const Matrix<double>& features,
                std::span<const double> property, const TaskPartition& tasks,
                Precision precision) {
  check_tuple(tuple, features.rows());
  check_task_sizes(tasks, tuple.size());
  if (precision == Precision::fp32) {
    return fit_with(TupleKernel<float>(features, property, tasks), tuple, tasks);
  }
  return fit_with(TupleKernel<double>(features, property, tasks), tuple, tasks);
}

std::vector<Model> l0_search(const Matrix<double>& features, std::span<const double> property,
                             const TaskPartition& tasks, const L0Config& config, L0Stats* stats) {
  config.check();
  if (features.rows() < static_cast<std::size_t>(config.dimension)) {
    throw std::invalid_argument("l0_search: subspace has fewer features than the dimension");
  }
  check_task_sizes(tasks, static_cast<std::size_t>(config.dimension));
  if (config.precision == Precision::fp32) {
    return search_with<float>(features, property, tasks, config, stats);
  }
  return search_with<double>(features, property, tasks, config, stats);
}

std::vector<Model> l0_search(const SelectedSubspace& subspace, std::span<const double> property,
                             const TaskPartition& tasks, const L0Config& config, L0Stats* stats) {
  std::vector<Model> models = l0_search(subspace.values(), property, tasks, config, stats);
  for (auto& m : models) {
    for (std::uint32_t i : m.tuple) m.descriptor.push_back(subspace[i].expr);
  }
  return models;
}

std::size_t autotune_chunk(const Matrix<double>& features, std::span<const double> property,
                           const TaskPartition& tasks, const L0Config& config,
                           std::uint64_t first_begin, std::uint64_t first_end) {
  config.check();
  auto run = [&](auto tag) {
    using T = decltype(tag);
    const TupleKernel<T> kernel(features, property, tasks);
    Search<T> search(kernel, config);
    return search.autotune(first_begin, std::min(first_end, search.total()));
  };
  if (config.precision == Precision::fp32) return run(float{});
  return run(double{});
}

}  // namespace sisso
