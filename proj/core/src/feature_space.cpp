// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/feature_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "sisso/error.hpp"
#include "sisso/parallel.hpp"

namespace sisso {

void GenerationConfig::check() const {
  if (max_rung < 0) throw ConfigError("max_rung", "must be >= 0");
  if (!(min_abs_value > 0.0)) throw ConfigError("min_abs_value", "must be positive");
  if (!(max_abs_value > 0.0)) throw ConfigError("max_abs_value", "must be positive");
  if (!(min_abs_value < max_abs_value)) {
    throw ConfigError("min_abs_value", "must be smaller than max_abs_value");
  }
  if (value_batch_size < 1) throw ConfigError("value_batch_size", "must be >= 1");
  if (!(dedup_tolerance >= 0.0)) throw ConfigError("dedup_tolerance", "must be >= 0");
  for (std::size_t i = 0; i < operators.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (operators[i] == operators[j]) {
        throw ConfigError("operators", "duplicate operator '" +
                                           std::string(op_info(operators[i]).name) + "'");
      }
    }
  }
}

std::string_view validity_name(Validity v) noexcept {
  switch (v) {
    case Validity::valid: return "valid";
    case Validity::non_finite: return "non_finite";
    case Validity::above_max: return "above_max";
    case Validity::below_min: return "below_min";
    case Validity::constant: return "constant";
  }
  return "?";
}

Validity validate_values(std::span<const double> values, const GenerationConfig& config) noexcept {
  double max_abs = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (!std::isfinite(v)) return Validity::non_finite;
    max_abs = std::max(max_abs, std::abs(v));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (max_abs > config.max_abs_value) return Validity::above_max;
  if (max_abs < config.min_abs_value) return Validity::below_min;
  if (values.empty() || hi - lo <= config.dedup_tolerance) return Validity::constant;
  return Validity::valid;
}

// ---------------------------------------------------------------------------
// ValueIndex

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

ValueIndex::ValueIndex(std::size_t n_samples, double tolerance)
    : tolerance_(tolerance), weights_(n_samples) {
  std::uint64_t state = 0x5155u;
  for (double& w : weights_) {
    w = 0.5 + static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    weight_sum_ += w;
  }
}

ValueIndex::Probe ValueIndex::probe(std::span<const double> values) const noexcept {
  double sum = 0.0;
  double abs_sum = 0.0;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += weights_[i] * values[i];
    abs_sum += weights_[i] * std::abs(values[i]);
    max_abs = std::max(max_abs, std::abs(values[i]));
  }
  Probe p;
  p.summary = sum;
  p.limit = tolerance_ * std::max(1.0, max_abs);
  const double spread = weight_sum_ * p.limit;
  const double rounding =
      2.0 * static_cast<double>(values.size() + 2) * std::numeric_limits<double>::epsilon() *
      (2.0 * abs_sum + spread);
  p.radius = spread + rounding + std::numeric_limits<double>::min();
  return p;
}

// ---------------------------------------------------------------------------
// FeatureSpace

std::size_t FeatureSpace::rung_end(int r) const noexcept {
  if (rung_end_.empty() || r < 0) return 0;
  if (r >= static_cast<int>(rung_end_.size())) return rung_end_.back();
  return rung_end_[static_cast<std::size_t>(r)];
}

FeatureChunk FeatureSpace::chunk(std::size_t begin, std::size_t end) const noexcept {
  const std::size_t n = n_samples();
  return FeatureChunk{std::span<const Expression>(features_).subspan(begin, end - begin),
                      values_.data().subspan(begin * n, (end - begin) * n), n};
}

void FeatureSpace::append(const Expression& e, std::span<const double> values,
                          const ValueIndex::Probe& p) {
  index_.insert(p, features_.size());
  keys_.insert(e.key());
  features_.push_back(e);
  values_.push_row(values);
}

FeatureSpace FeatureSpace::from_primaries(const Dataset& data, const GenerationConfig& config) {
  FeatureSpace space;
  const std::size_t n = data.n_samples();
  space.primaries_ = data.primaries;
  space.values_ = Matrix<double>(0, n);
  space.index_ = ValueIndex(n, config.dedup_tolerance);
  std::vector<double> scratch(n);
  for (std::size_t p = 0; p < data.n_primaries(); ++p) {
    const auto values = data.primary_values.row(p);
    if (validate_values(values, config) != Validity::valid) continue;
    const auto probe = space.index_.probe(values);
    const bool dup = space.index_.contains(
        values, probe, [&](std::size_t id, std::span<double>) { return space.values(id); }, scratch);
    if (dup) continue;
    space.append(Expression::primary(p, data.primaries[p].name, data.primaries[p].unit), values,
                 probe);
  }
  space.close_rung();
  return space;
}

// ---------------------------------------------------------------------------
// Candidate pairs

namespace {

bool needs_dimensionless(OpKind op) {
  switch (op) {
    case OpKind::log:
    case OpKind::exp:
    case OpKind::neg_exp:
    case OpKind::sin:
    case OpKind::cos: return true;
    default: return false;
  }
}

bool needs_equal_units(OpKind op) {
  return op == OpKind::add || op == OpKind::sub || op == OpKind::abs_diff;
}

}  // namespace

CandidatePairList generate_pairs(OpKind op, const FeatureSpace& pool, int target_rung) {
  if (target_rung < 1 || target_rung - 1 > pool.top_rung()) {
    throw std::invalid_argument("generate_pairs: pool is not complete through rung " +
                                std::to_string(target_rung - 1));
  }
  CandidatePairList out{op, {}};
  const int prev = target_rung - 1;
  const std::size_t begin_prev = pool.rung_begin(prev);
  const std::size_t end = pool.rung_end(prev);
  const Operator& info = op_info(op);

  if (!info.binary()) {
    for (std::size_t i = begin_prev; i < end; ++i) {
      if (needs_dimensionless(op) && !pool.feature(i).unit().dimensionless()) continue;
      out.pairs.push_back({static_cast<std::uint32_t>(i)});
    }
    return out;
  }

  // Units interned to small ids so the O(N^2) sweep compares integers.
  std::vector<std::uint32_t> unit_id(end);
  if (needs_equal_units(op)) {
    std::unordered_map<std::string, std::uint32_t> ids;
    for (std::size_t i = 0; i < end; ++i) {
      unit_id[i] = ids.try_emplace(pool.feature(i).unit().to_string(),
                                   static_cast<std::uint32_t>(ids.size()))
                       .first->second;
    }
  }
  std::vector<char> has_zero;
  if (op == OpKind::div) {
    has_zero.resize(end);
    for (std::size_t i = 0; i < end; ++i) {
      const auto v = pool.values(i);
      has_zero[i] = std::find(v.begin(), v.end(), 0.0) != v.end();
    }
  }

  for (std::size_t i = 0; i < end; ++i) {
    const bool i_prev = i >= begin_prev;
    std::size_t j0;
    if (info.commutative) {
      j0 = i_prev ? i : begin_prev;
    } else {
      j0 = i_prev ? 0 : begin_prev;
    }
    for (std::size_t j = j0; j < end; ++j) {
      if (needs_equal_units(op) && unit_id[i] != unit_id[j]) continue;
      if (op == OpKind::div && has_zero[j]) continue;
      out.pairs.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rung generation

namespace {

/// Evaluates, validates and deduplicates every candidate of one rung. The
/// dedup decision depends only on candidate order and values, so the
/// materialized and streamed modes keep exactly the same features.
class RungEngine {
 public:
  RungEngine(const FeatureSpace& pool, int rung, const GenerationConfig& config, bool keep_values)
      : pool_(pool),
        config_(config),
        keep_values_(keep_values),
        index_(pool.value_index()),
        kept_(0, pool.n_samples()) {
    for (OpKind op : config.operators) lists_.push_back(generate_pairs(op, pool, rung));
  }

  std::size_t projected_candidates() const noexcept {
    std::size_t n = 0;
    for (const auto& l : lists_) n += l.pairs.size();
    return n;
  }

  /// emit(span<const Expression>, const FeatureChunk&) per chunk of survivors.
  template <typename Emit>
  void run(Emit&& emit) {
    const std::size_t n = pool_.n_samples();
    const std::size_t batch = std::max<std::size_t>(1, config_.value_batch_size);
    const unsigned workers = resolve_workers(config_.workers);
    std::vector<double> buffer;
    std::vector<Validity> flags;
    std::vector<double> scratch(n);
    std::vector<Expression> chunk_exprs;
    std::vector<double> chunk_values;

    for (const auto& list : lists_) {
      const OpKind op = list.op;
      for (std::size_t start = 0; start < list.pairs.size(); start += batch) {
        const std::size_t count = std::min(batch, list.pairs.size() - start);
        buffer.resize(count * n);
        flags.resize(count);

        const std::size_t block = std::max<std::size_t>(16, count / (workers * 8) + 1);
        const std::size_t n_blocks = (count + block - 1) / block;
        parallel_for(n_blocks, workers, [&](std::size_t b, unsigned) {
          const std::size_t lo = b * block;
          const std::size_t hi = std::min(count, lo + block);
          for (std::size_t k = lo; k < hi; ++k) {
            std::span<double> out(buffer.data() + k * n, n);
            evaluate_pair(op, list.pairs[start + k], out);
            flags[k] = validate_values(out, config_);
          }
        });

        chunk_exprs.clear();
        chunk_values.clear();
        for (std::size_t k = 0; k < count; ++k) {
          if (flags[k] != Validity::valid) continue;
          const std::span<const double> row(buffer.data() + k * n, n);
          const auto probe = index_.probe(row);
          const bool dup = index_.contains(
              row, probe, [&](std::size_t id, std::span<double> s) { return fetch(id, s); },
              scratch);
          if (dup) continue;
          const CandidatePair pair = list.pairs[start + k];
          Expression e = make_expression(op, pair);
          if (pool_.contains_key(e.key())) continue;

          index_.insert(probe, pool_.size() + survivors_.size());
          survivors_.push_back({op, pair});
          if (keep_values_) {
            kept_.push_row(row);
            kept_exprs_.push_back(e);
          }
          chunk_values.insert(chunk_values.end(), row.begin(), row.end());
          chunk_exprs.push_back(std::move(e));
        }
        if (!chunk_exprs.empty()) emit(FeatureChunk{chunk_exprs, chunk_values, n});
      }
    }
  }

  std::vector<Expression>& kept_expressions() noexcept { return kept_exprs_; }
  const Matrix<double>& kept_values() const noexcept { return kept_; }
  const ValueIndex& index() const noexcept { return index_; }

 private:
  struct Survivor {
    OpKind op;
    CandidatePair pair;
  };

  void evaluate_pair(OpKind op, CandidatePair pair, std::span<double> out) const noexcept {
    const auto a = pool_.values(pair.first);
    const std::span<const double> b =
        pair.second == kNoChild ? std::span<const double>() : pool_.values(pair.second);
    apply_op<double>(op, a, b, out);
  }

  std::span<const double> fetch(std::size_t id, std::span<double> scratch) const noexcept {
    if (id < pool_.size()) return pool_.values(id);
    const std::size_t s = id - pool_.size();
    if (keep_values_) return kept_.row(s);
    evaluate_pair(survivors_[s].op, survivors_[s].pair, scratch);
    return scratch;
  }

  Expression make_expression(OpKind op, CandidatePair pair) const {
    if (pair.second == kNoChild) {
      const Expression kids[] = {pool_.feature(pair.first)};
      const Unit units[] = {kids[0].unit()};
      return Expression::apply_unchecked(op, kids, *try_unit_of(op, units));
    }
    const Expression kids[] = {pool_.feature(pair.first), pool_.feature(pair.second)};
    const Unit units[] = {kids[0].unit(), kids[1].unit()};
    return Expression::apply_unchecked(op, kids, *try_unit_of(op, units));
  }

  const FeatureSpace& pool_;
  const GenerationConfig& config_;
  bool keep_values_;
  std::vector<CandidatePairList> lists_;
  ValueIndex index_;
  std::vector<Survivor> survivors_;
  Matrix<double> kept_;
  std::vector<Expression> kept_exprs_;
};

}  // namespace

FeatureSpace generate_rung(FeatureSpace pool, int target_rung, const GenerationConfig& config) {
  if (target_rung - 1 != pool.top_rung()) {
    throw std::invalid_argument("generate_rung: pool must be complete through rung " +
                                std::to_string(target_rung - 1));
  }
  std::vector<Expression> exprs;
  Matrix<double> values;
  {
    RungEngine engine(pool, target_rung, config, true);
    const std::size_t projected = engine.projected_candidates();
    const double bytes = static_cast<double>(projected) * static_cast<double>(pool.n_samples()) * 8.0;
    if (bytes > static_cast<double>(config.memory_budget_bytes)) {
      std::string msg = "rung " + std::to_string(target_rung) + " projects " +
                        std::to_string(projected) + " candidates (" +
                        std::to_string(bytes / (1024.0 * 1024.0)) +
                        " MiB), above the memory budget";
      if (target_rung == config.max_rung) msg += "; set materialize_last_rung = false";
      throw CapacityError(msg);
    }
    engine.run([](const FeatureChunk&) {});
    exprs = std::move(engine.kept_expressions());
    values = engine.kept_values();
  }
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    const auto row = values.row(i);
    pool.append(exprs[i], row, pool.index_.probe(row));
  }
  pool.close_rung();
  return pool;
}

FeatureSpace build_feature_space(const Dataset& data, const GenerationConfig& config) {
  config.check();
  FeatureSpace space = FeatureSpace::from_primaries(data, config);
  const int last = config.materialize_last_rung ? config.max_rung : config.max_rung - 1;
  for (int r = 1; r <= last; ++r) space = generate_rung(std::move(space), r, config);
  return space;
}

void stream_final_rung(const FeatureSpace& pool, const GenerationConfig& config,
                       const ChunkConsumer& consumer) {
  if (config.max_rung <= 0) return;
  if (pool.top_rung() != config.max_rung - 1) {
    throw std::invalid_argument("stream_final_rung: pool must be complete through rung " +
                                std::to_string(config.max_rung - 1));
  }
  RungEngine engine(pool, config.max_rung, config, false);
  engine.run([&](const FeatureChunk& chunk) { consumer(chunk); });
}

void scan_features(const FeatureSpace& pool, const GenerationConfig& config,
                   std::size_t chunk_size, const ChunkConsumer& consumer) {
  chunk_size = std::max<std::size_t>(1, chunk_size);
  for (std::size_t begin = 0; begin < pool.size(); begin += chunk_size) {
    consumer(pool.chunk(begin, std::min(pool.size(), begin + chunk_size)));
  }
  if (pool.top_rung() < config.max_rung) stream_final_rung(pool, config, consumer);
}

}  // namespace sisso
