// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "sisso/dataset.hpp"
#include "sisso/expression.hpp"
#include "sisso/matrix.hpp"
#include "sisso/operators.hpp"

namespace sisso {

struct GenerationConfig {
  std::vector<OpKind> operators;
  int max_rung = 1;
  /// Bounds on max_i |v_i| of every generated value vector.
  double min_abs_value = 1e-5;
  double max_abs_value = 1e8;
  bool materialize_last_rung = true;
  /// Candidates evaluated per chunk.
  std::size_t value_batch_size = 65536;
  /// Duplicate and constant-vector tolerance.
  double dedup_tolerance = 1e-10;
  /// Upper limit for the values of one materialized rung.
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
  unsigned workers = 1;

  /// Throws ConfigError on violated invariants.
  void check() const;

  friend bool operator==(const GenerationConfig&, const GenerationConfig&) = default;
};

enum class Validity { valid, non_finite, above_max, below_min, constant };

std::string_view validity_name(Validity v) noexcept;

/// Value based validity rules applied to every candidate feature.
Validity validate_values(std::span<const double> values, const GenerationConfig& config) noexcept;

inline constexpr std::uint32_t kNoChild = std::numeric_limits<std::uint32_t>::max();

struct CandidatePair {
  std::uint32_t first;
  std::uint32_t second = kNoChild;

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

struct CandidatePairList {
  OpKind op;
  std::vector<CandidatePair> pairs;
};

/// Detects value vectors that equal an already indexed one within
/// tolerance: max_i |a_i - b_i| <= tol * max(1, max_i |a_i|), `a` being the
/// candidate. Each vector is indexed by a weighted sum of its elements; any
/// duplicate must fall inside a provable radius around the candidate's sum,
/// so only entries in that range get an exact elementwise comparison.
class ValueIndex {
 public:
  ValueIndex() = default;
  ValueIndex(std::size_t n_samples, double tolerance);

  struct Probe {
    double summary = 0.0;
    double radius = 0.0;
    double limit = 0.0;
  };

  Probe probe(std::span<const double> values) const noexcept;

  /// `fetch(id, scratch)` must return the stored vector of entry `id`;
  /// `scratch` (of n_samples) may be used to recompute it.
  template <typename Fetch>
  bool contains(std::span<const double> values, const Probe& p, Fetch&& fetch,
                std::span<double> scratch) const {
    auto it = by_summary_.lower_bound(p.summary - p.radius);
    const auto end = by_summary_.upper_bound(p.summary + p.radius);
    for (; it != end; ++it) {
      const std::span<const double> other = fetch(it->second, scratch);
      bool same = true;
      for (std::size_t i = 0; i < values.size() && same; ++i) {
        same = std::abs(values[i] - other[i]) <= p.limit;
      }
      if (same) return true;
    }
    return false;
  }

  void insert(const Probe& p, std::size_t id) { by_summary_.emplace(p.summary, id); }
  std::size_t size() const noexcept { return by_summary_.size(); }

 private:
  double tolerance_ = 0.0;
  std::vector<double> weights_;
  double weight_sum_ = 0.0;
  std::multimap<double, std::size_t> by_summary_;
};

/// A contiguous run of features with their values, `values` holding
/// features.size() rows of n_samples doubles each.
struct FeatureChunk {
  std::span<const Expression> features;
  std::span<const double> values;
  std::size_t n_samples = 0;

  std::span<const double> row(std::size_t i) const noexcept {
    return values.subspan(i * n_samples, n_samples);
  }
};

using ChunkConsumer = std::function<void(const FeatureChunk&)>;

/// Materialized pool of validated features, grouped by rung.
class FeatureSpace {
 public:
  FeatureSpace() = default;

  /// Rung 0: every primary feature whose values pass the validity rules
  /// and are not a duplicate of an earlier primary.
  static FeatureSpace from_primaries(const Dataset& data, const GenerationConfig& config);

  std::size_t size() const noexcept { return features_.size(); }
  std::size_t n_samples() const noexcept { return values_.cols(); }
  int top_rung() const noexcept { return static_cast<int>(rung_end_.size()) - 1; }
  std::span<const PrimaryFeature> primaries() const noexcept { return primaries_; }

  const Expression& feature(std::size_t i) const noexcept { return features_[i]; }
  std::span<const Expression> features() const noexcept { return features_; }
  std::span<const double> values(std::size_t i) const noexcept { return values_.row(i); }

  /// Number of features of rung <= r.
  std::size_t rung_end(int r) const noexcept;
  std::size_t rung_begin(int r) const noexcept { return r <= 0 ? 0 : rung_end(r - 1); }

  bool contains_key(const std::string& key) const { return keys_.contains(key); }
  const ValueIndex& value_index() const noexcept { return index_; }

  /// Features [begin, end) as one chunk.
  FeatureChunk chunk(std::size_t begin, std::size_t end) const noexcept;

 private:
  friend FeatureSpace generate_rung(FeatureSpace pool, int target_rung,
                                    const GenerationConfig& config);
  void append(const Expression& e, std::span<const double> values, const ValueIndex::Probe& p);
  void close_rung() { rung_end_.push_back(features_.size()); }

  std::vector<PrimaryFeature> primaries_;
  std::vector<Expression> features_;
  Matrix<double> values_;
  std::vector<std::size_t> rung_end_;
  std::unordered_set<std::string> keys_;
  ValueIndex index_;
};

/// Candidate children for `op` at `target_rung`, in lexicographic (i, j)
/// order: max(rung_i, rung_j) = target_rung - 1, units compatible, each
/// unordered pair once for commutative operators, no divisor containing a
/// zero.
CandidatePairList generate_pairs(OpKind op, const FeatureSpace& pool, int target_rung);

/// Appends rung `target_rung` to a pool complete through target_rung - 1.
/// Throws CapacityError when the candidate values would exceed
/// config.memory_budget_bytes.
FeatureSpace generate_rung(FeatureSpace pool, int target_rung, const GenerationConfig& config);

/// Primaries plus rungs 1..max_rung, or 1..max_rung-1 when the last rung is
/// streamed (materialize_last_rung = false).
FeatureSpace build_feature_space(const Dataset& data, const GenerationConfig& config);

/// Generates rung config.max_rung on the fly and hands each chunk of valid
/// features to `consumer`. Deterministic and repeatable; no values are kept
/// between chunks. `pool` must be complete through max_rung - 1.
void stream_final_rung(const FeatureSpace& pool, const GenerationConfig& config,
                       const ChunkConsumer& consumer);

/// Entry point shared by both modes: feeds every feature of the space
/// (materialized rungs, then the streamed last rung when the pool stops
/// short of max_rung) to `consumer` in chunks of at most chunk_size.
void scan_features(const FeatureSpace& pool, const GenerationConfig& config,
                   std::size_t chunk_size, const ChunkConsumer& consumer);

}  // namespace sisso
