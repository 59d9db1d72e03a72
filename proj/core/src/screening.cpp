// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sisso/error.hpp"
#include "sisso/parallel.hpp"

namespace sisso {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw DegenerateInput("pearson: need at least two samples");
  const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
  const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
  if (*xlo == *xhi || *ylo == *yhi) throw DegenerateInput("pearson: constant input vector");

  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Centered sum of squares this small relative to the data is rounding noise
// of a constant slice.
bool negligible_spread(double ss, double max_abs, std::size_t n) noexcept {
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() * max_abs;
  return ss <= static_cast<double>(n) * noise * noise;
}

}  // namespace

ProjectionScorer::ProjectionScorer(const ScreeningTarget& target)
    : n_targets_(target.targets.size()) {
  const std::size_t n_total = target.tasks.n_samples();
  for (const auto& t : target.targets) {
    if (t.size() != n_total) throw std::invalid_argument("ScreeningTarget: length mismatch");
  }
  for (const auto& slice : target.tasks.slices) {
    TaskTarget task;
    task.samples = slice;
    task.weight = static_cast<double>(slice.size()) / static_cast<double>(n_total);
    for (const auto& t : target.targets) {
      double mean = 0.0;
      double max_abs = 0.0;
      for (std::size_t s : slice) {
        mean += t[s];
        max_abs = std::max(max_abs, std::abs(t[s]));
      }
      mean /= static_cast<double>(slice.size());
      std::vector<double> c;
      c.reserve(slice.size());
      double ss = 0.0;
      for (std::size_t s : slice) {
        c.push_back(t[s] - mean);
        ss += c.back() * c.back();
      }
      task.norm.push_back(negligible_spread(ss, max_abs, slice.size()) ? 0.0 : std::sqrt(ss));
      task.centered.push_back(std::move(c));
    }
    tasks_.push_back(std::move(task));
  }
  contiguous_single_ = tasks_.size() == 1;
}

double ProjectionScorer::score(std::span<const double> feature) const noexcept {
  thread_local std::vector<double> centered;
  double best = 0.0;
  std::vector<double> acc(n_targets_, 0.0);
  for (const auto& task : tasks_) {
    const std::size_t m = task.samples.size();
    centered.resize(m);
    double mean = 0.0;
    double max_abs = 0.0;
    if (contiguous_single_) {
      for (std::size_t i = 0; i < m; ++i) {
        mean += feature[i];
        max_abs = std::max(max_abs, std::abs(feature[i]));
      }
    } else {
      for (std::size_t s : task.samples) {
        mean += feature[s];
        max_abs = std::max(max_abs, std::abs(feature[s]));
      }
    }
    mean /= static_cast<double>(m);
    double sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = (contiguous_single_ ? feature[i] : feature[task.samples[i]]) - mean;
      centered[i] = v;
      sxx += v * v;
    }
    if (negligible_spread(sxx, max_abs, m)) continue;
    const double fnorm = std::sqrt(sxx);
    for (std::size_t t = 0; t < n_targets_; ++t) {
      if (task.norm[t] == 0.0) continue;
      const auto& ct = task.centered[t];
      double sxy = 0.0;
      for (std::size_t i = 0; i < m; ++i) sxy += centered[i] * ct[i];
      acc[t] += task.weight * std::abs(sxy) / (fnorm * task.norm[t]);
    }
  }
  for (double a : acc) best = std::max(best, a);
  return std::isfinite(best) ? best : 0.0;
}

double projection_score(std::span<const double> feature, const ScreeningTarget& target) {
  return ProjectionScorer(target).score(feature);
}

void SelectedSubspace::append(std::vector<SelectedFeature> entries) {
  for (auto& e : entries) {
    if (!keys_.insert(e.expr.key()).second) {
      throw std::invalid_argument("SelectedSubspace: duplicate feature " + e.expr.key());
    }
    entries_.push_back(std::move(e));
  }
}

Matrix<double> SelectedSubspace::values() const {
  Matrix<double> out(0, entries_.empty() ? 0 : entries_.front().values.size());
  out.reserve_rows(entries_.size());
  for (const auto& e : entries_) out.push_row(e.values);
  return out;
}

FeatureScan materialized_scan(const FeatureSpace& space, std::size_t chunk_size) {
  return [&space, chunk_size](const ChunkConsumer& consumer) {
    const std::size_t c = std::max<std::size_t>(1, chunk_size);
    for (std::size_t begin = 0; begin < space.size(); begin += c) {
      consumer(space.chunk(begin, std::min(space.size(), begin + c)));
    }
  };
}

FeatureScan streamed_scan(const FeatureSpace& pool, const GenerationConfig& config,
                          std::size_t chunk_size) {
  return [&pool, &config, chunk_size](const ChunkConsumer& consumer) {
    scan_features(pool, config, chunk_size, consumer);
  };
}

namespace {

struct Ranked {
  double score;
  const std::string* key;
  std::size_t index;
};

// Higher score first, then smaller canonical key.
bool better(double sa, const std::string& ka, double sb, const std::string& kb) noexcept {
  if (sa != sb) return sa > sb;
  return ka < kb;
}

}  // namespace

std::vector<SelectedFeature> sis_select(const FeatureScan& scan, const ScreeningTarget& target,
                                        std::size_t n_select, const SelectedSubspace& already,
                                        unsigned workers) {
  const ProjectionScorer scorer(target);
  const unsigned n_workers = resolve_workers(workers);
  std::vector<SelectedFeature> top;
  std::size_t seen = 0;
  if (n_select == 0) return top;

  auto worse_top = [](const Ranked& a, const Ranked& b) {
    return better(a.score, *a.key, b.score, *b.key);
  };

  scan([&](const FeatureChunk& chunk) {
    const std::size_t n = chunk.features.size();
    seen += n;
    const std::size_t block = std::max<std::size_t>(64, n / (n_workers * 4) + 1);
    const std::size_t n_blocks = (n + block - 1) / block;
    // Per-block heaps keep the merge independent of which worker ran what.
    std::vector<std::vector<Ranked>> heaps(n_blocks);
    parallel_for(n_blocks, n_workers, [&](std::size_t b, unsigned) {
      auto& heap = heaps[b];
      const std::size_t hi = std::min(n, (b + 1) * block);
      for (std::size_t i = b * block; i < hi; ++i) {
        const Expression& e = chunk.features[i];
        if (already.contains(e.key())) continue;
        Ranked r{scorer.score(chunk.row(i)), &e.key(), i};
        if (heap.size() < n_select) {
          heap.push_back(r);
          std::push_heap(heap.begin(), heap.end(), worse_top);
        } else if (worse_top(r, heap.front())) {
          std::pop_heap(heap.begin(), heap.end(), worse_top);
          heap.back() = r;
          std::push_heap(heap.begin(), heap.end(), worse_top);
        }
      }
    });

    std::vector<Ranked> merged;
    for (const auto& h : heaps) merged.insert(merged.end(), h.begin(), h.end());
    std::sort(merged.begin(), merged.end(), worse_top);
    if (merged.size() > n_select) merged.resize(n_select);

    // Fold into the running selection: both lists are sorted best first.
    std::vector<SelectedFeature> next;
    next.reserve(std::min(n_select, top.size() + merged.size()));
    std::size_t a = 0;
    std::size_t b = 0;
    while (next.size() < n_select && (a < top.size() || b < merged.size())) {
      const bool take_new =
          a == top.size() ||
          (b < merged.size() &&
           better(merged[b].score, *merged[b].key, top[a].score, top[a].expr.key()));
      if (take_new) {
        const auto row = chunk.row(merged[b].index);
        next.push_back({chunk.features[merged[b].index], merged[b].score, {row.begin(), row.end()}});
        ++b;
      } else {
        next.push_back(std::move(top[a++]));
      }
    }
    top = std::move(next);
  });

  if (seen == 0) throw EmptySpace("sis_select: the feature space is empty");
  return top;
}

}  // namespace sisso
