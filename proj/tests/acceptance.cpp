// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion; exit status is
// the number of failures. Arguments select criteria by number (default all).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "planted.hpp"
#include "sisso/sisso.hpp"

namespace fs = std::filesystem;
using namespace sisso;

namespace {

// Pinned tolerances and limits.
constexpr double kCountSeconds = 1.0;
constexpr double kL0RelTol = 1e-10;
constexpr double kL0Seconds = 10.0;
constexpr double kPlantedMse = 1e-16;
constexpr double kPlantedSeconds = 30.0;
constexpr double kPearsonTol = 1e-12;
constexpr double kPearsonUnitTol = 1e-15;
constexpr double kSpaceSeconds = 10.0;
constexpr double kSpeedup = 4.0;
constexpr std::uint64_t kPerfTuples = 10'000'000;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

struct Proc {
  int code = -1;
  std::string out;
};

Proc run_cli(const std::string& args) {
  Proc p;
  FILE* pipe = popen((std::string(SISSO_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
  if (!pipe) return p;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) p.out.append(buf, n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

Outcome combinatorial_counts() {
  const fs::path dir = fs::temp_directory_path() / "sisso_acceptance_count";
  fs::create_directories(dir);
  struct Case {
    int n_sis;
    int dimension;
    const char* want;
  };
  const Case cases[] = {{100000, 2, "dimension 2 subspace 100000 models 4999950000\n"},
                        {5000, 3, "dimension 3 subspace 5000 models 20820835000\n"}};
  Outcome o{true, ""};
  for (const Case& c : cases) {
    const fs::path cfg = dir / ("count_" + std::to_string(c.dimension) + ".json");
    std::ofstream(cfg) << "{\"data_file\": \"absent.csv\", \"property_key\": \"P\", \"operators\": [\"mul\"], "
                       << "\"subspace_accounting\": \"total\", \"n_sis_select\": " << c.n_sis
                       << ", \"dimension\": " << c.dimension << "}";
    const auto t0 = Clock::now();
    const Proc p = run_cli("count " + cfg.string() + " --primaries 10");
    const double dt = since(t0);
    const bool ok = p.code == 0 && p.out.find(c.want) != std::string::npos && dt < kCountSeconds;
    o.pass = o.pass && ok;
    std::string line(c.want);
    line.pop_back();
    o.detail += (o.detail.empty() ? "" : "; ") + line + (ok ? " found" : " MISSING") + fmt(" in %.3f s", dt);
  }
  fs::remove_all(dir);
  return o;
}

Outcome l0_oracle() {
  std::mt19937_64 rng(20240501);
  std::normal_distribution<double> g;
  int agree = 0;
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n_samples = 10 + rng() % 51;
    const std::size_t m = 5 + rng() % 21;
    const int n = 1 + trial % 3;
    const std::size_t n_tasks = trial % 4 == 3 ? 2 : 1;
    Matrix<double> f(m, n_samples);
    std::vector<oracle::Vec> cols(m, oracle::Vec(n_samples));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t s = 0; s < n_samples; ++s) cols[i][s] = f(i, s) = g(rng);
    }
    std::vector<double> p(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) p[s] = 0.7 * f(0, s) - 0.4 * f(m - 1, s) + g(rng);
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < n_samples; ++s) labels.push_back(s % n_tasks ? "b" : "a");
    const TaskPartition tasks = TaskPartition::from_labels(labels);
    L0Config c;
    c.dimension = n;
    c.batch_size = 1 + rng() % 500;
    const auto models = l0_search(f, p, tasks, c);
    const auto want = oracle::brute_force_l0(cols, p, n, tasks.slices);
    if (models.empty()) continue;
    const std::vector<std::uint32_t> wt(want.tuple.begin(), want.tuple.end());
    const double rel = std::abs(models[0].mse - static_cast<double>(want.mse)) / static_cast<double>(want.mse);
    worst = std::max(worst, rel);
    if (models[0].tuple == wt && rel <= kL0RelTol) ++agree;
  }
  const double dt = since(t0);
  return {agree == 20 && dt < kL0Seconds,
          std::to_string(agree) + "/20 datasets agree, worst relative score error " + fmt("%.2e", worst) +
              " (tol " + fmt("%.0e", kL0RelTol) + ")" + fmt(", %.2f s", dt)};
}

Outcome planted_recovery() {
  const auto t0 = Clock::now();
  int ok = 0;
  double worst = 0.0;
  for (std::size_t np = 4; np <= 8; ++np) {
    const PipelineResult r = run_pipeline(planted::config(), planted::data(np));
    const Model& best = r.dimensions.back().models.front();
    worst = std::max(worst, best.mse);
    if (planted::rendered(best) == planted::descriptor() && best.mse <= kPlantedMse) ++ok;
  }
  const double dt = since(t0);
  return {ok == 5 && dt < kPlantedSeconds,
          std::to_string(ok) + "/5 runs (4..8 primaries) return {(x1 * x2), sqrt(x3)}, worst mse " +
              fmt("%.2e", worst) + fmt(" (limit %.0e)", kPlantedMse) + fmt(", %.2f s", dt)};
}

Outcome pearson_check() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> x(n), y(n);
    const double rho = std::uniform_real_distribution<double>(-1, 1)(rng);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g(rng) * 10 + 3;
      y[i] = rho * x[i] + g(rng);
    }
    worst = std::max(worst, std::abs(pearson(x, y) - oracle::pearson(x, y)));
  }
  double unit_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 50;
    std::vector<double> x(n), up(n), down(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g(rng);
      up[i] = 2.5 * x[i] + 1.0;
      down[i] = -0.75 * x[i] + 4.0;
    }
    unit_err = std::max(unit_err, std::abs(pearson(x, up) - 1.0));
    unit_err = std::max(unit_err, std::abs(pearson(x, down) + 1.0));
  }
  return {worst <= kPearsonTol && unit_err <= kPearsonUnitTol,
          "max |r - oracle| " + fmt("%.2e", worst) + fmt(" (tol %.0e)", kPearsonTol) +
              ", max |r -/+ 1| on exact lines " + fmt("%.2e", unit_err) + fmt(" (tol %.0e)", kPearsonUnitTol)};
}

// Criterion 5 and 6 instance: 4 primaries with units m, s, kg, 1.
Dataset space_instance() { return planted::data(4); }

GenerationConfig space_config() {
  GenerationConfig c;
  c.operators = {OpKind::add, OpKind::mul, OpKind::div, OpKind::sqrt};
  c.max_rung = 2;
  return c;
}

Outcome feature_space_oracle() {
  const Dataset d = space_instance();
  const GenerationConfig c = space_config();
  const auto t0 = Clock::now();
  const FeatureSpace s = build_feature_space(d, c);
  std::vector<oracle::Vec> prims;
  std::vector<Unit> units;
  for (std::size_t p = 0; p < d.n_primaries(); ++p) {
    prims.emplace_back(d.primary_values.row(p).begin(), d.primary_values.row(p).end());
    units.push_back(d.primaries[p].unit);
  }
  const auto want = oracle::enumerate_trees(prims, units, {"add", "mul", "div", "sqrt"}, 2,
                                            {c.min_abs_value, c.max_abs_value, c.dedup_tolerance});
  const double dt = since(t0);
  std::set<std::string> got_keys, want_keys;
  for (std::size_t i = 0; i < s.size(); ++i) got_keys.insert(s.feature(i).key());
  for (const auto& f : want) want_keys.insert(f.key);
  std::size_t missing = 0, extra = 0;
  for (const auto& k : want_keys) missing += !got_keys.contains(k);
  for (const auto& k : got_keys) extra += !want_keys.contains(k);
  return {got_keys == want_keys && dt < kSpaceSeconds,
          std::to_string(got_keys.size()) + " generated vs " + std::to_string(want_keys.size()) +
              " enumerated (" + std::to_string(missing) + " missing, " + std::to_string(extra) + " extra)" +
              fmt(", %.2f s", dt)};
}

Outcome mode_equivalence() {
  const Dataset d = space_instance();
  RunConfig c = planted::config();
  c.generation.operators = space_config().operators;
  c.n_sis_select = 30;
  c.generation.materialize_last_rung = true;
  const PipelineResult a = run_pipeline(c, d);
  c.generation.materialize_last_rung = false;
  c.generation.value_batch_size = 17;
  const PipelineResult b = run_pipeline(c, d);
  bool same = a.subspace.size() == b.subspace.size();
  for (std::size_t i = 0; same && i < a.subspace.size(); ++i) {
    same = a.subspace[i].expr.key() == b.subspace[i].expr.key() && a.subspace[i].score == b.subspace[i].score;
  }
  return {same, std::to_string(a.subspace.size()) + " selected features over 2 dimensions, " +
                    (same ? "identical order and scores" : "DIFFERENT") + "; materialized " +
                    std::to_string(a.materialized_features) + " vs " + std::to_string(b.materialized_features) +
                    " stored"};
}

std::string model_files(const RunConfig& c, const Dataset& d) {
  const PipelineResult r = run_pipeline(c, d);
  std::string out;
  for (const auto& dim : r.dimensions) {
    out += "models_dim" + std::to_string(dim.dimension) + ".txt\n";
    out += serialize_models(dim.models, config_digest(c));
  }
  return out;
}

Outcome determinism() {
  const Dataset d = planted::data(6);
  const std::string ref = model_files(planted::config(), d);
  int same = 0, total = 0;
  for (unsigned w : {1u, 4u, 8u}) {
    for (std::size_t batch : {64u, 131072u}) {
      RunConfig c = planted::config();
      c.workers = w;
      c.l0.batch_size = batch;
      ++total;
      same += model_files(c, d) == ref;
    }
  }
  return {same == total, std::to_string(same) + "/" + std::to_string(total) +
                             " (workers x l0 batch) runs byte-identical to the reference"};
}

Outcome precision_agreement() {
  const Dataset d = planted::data(6);
  RunConfig c = planted::config();
  const PipelineResult a = run_pipeline(c, d);
  c.l0.precision = Precision::fp32;
  const PipelineResult b = run_pipeline(c, d);
  bool same = a.dimensions.size() == b.dimensions.size();
  std::string detail;
  for (std::size_t i = 0; same && i < a.dimensions.size(); ++i) {
    const auto& ma = a.dimensions[i].models.front();
    const auto& mb = b.dimensions[i].models.front();
    same = planted::rendered(ma) == planted::rendered(mb);
    detail += "d" + std::to_string(i + 1) + " fp64 mse " + fmt("%.2e", ma.mse) + " fp32 mse " +
              fmt("%.2e", mb.mse) + "; ";
  }
  return {same, detail + (same ? "same descriptors" : "DIFFERENT descriptors")};
}

Outcome scaling() {
  const std::size_t n_samples = 200;
  std::size_t m = 2;
  while (m * (m - 1) / 2 < kPerfTuples) ++m;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Matrix<double> f(m, n_samples);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t s = 0; s < n_samples; ++s) f(i, s) = g(rng);
  }
  std::vector<double> p(n_samples);
  for (double& v : p) v = g(rng);
  const TaskPartition tasks = TaskPartition::single(n_samples);
  auto rate = [&](unsigned workers) {
    L0Config c;
    c.dimension = 2;
    c.workers = workers;
    L0Stats stats;
    l0_search(f, p, tasks, c, &stats);
    return static_cast<double>(stats.tuples_scored) / stats.seconds;
  };
  const double r1 = rate(1);
  const double r8 = rate(8);
  const double speedup = r8 / r1;
  return {speedup >= kSpeedup,
          std::to_string(m * (m - 1) / 2) + " tuples: 1 worker " + fmt("%.3e", r1) + " tuples/s, 8 workers " +
              fmt("%.3e", r8) + " tuples/s, speedup " + fmt("%.2f", speedup) + fmt(" (need %.1f)", kSpeedup) +
              ", hardware threads " + std::to_string(std::thread::hardware_concurrency())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria = {
      {1, {"combinatorial counts", combinatorial_counts}},
      {2, {"l0 oracle equivalence", l0_oracle}},
      {3, {"planted-model recovery", planted_recovery}},
      {4, {"pearson correctness", pearson_check}},
      {5, {"feature-space oracle", feature_space_oracle}},
      {6, {"mode equivalence", mode_equivalence}},
      {7, {"determinism", determinism}},
      {8, {"precision agreement", precision_agreement}},
      {9, {"l0 parallel throughput", scaling}},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [k, v] : criteria) selected.insert(k);
  }
  int failures = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::printf("FAIL %d unknown criterion\n", k);
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", k, it->second.first, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures;
}
