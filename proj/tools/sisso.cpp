// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

// sisso: batch driver for feature creation, screening and l0 search.
//
//   sisso run <config.json> [--workers N] [--output-dir DIR] ...
//   sisso count <config.json> [--primaries N]
//   sisso validate <config.json>
//   sisso bench --primaries N --samples N --tasks N [--config FILE] ...
//
// Exit codes: 0 success, 1 validation or config error, 2 runtime error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sisso/sisso.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

struct RunOverrides {
  std::optional<unsigned> workers;
  std::optional<std::string> precision;
  std::optional<std::size_t> l0_batch_size;
  std::optional<std::size_t> n_sis_select;
  bool on_the_fly = false;
  bool materialize = false;
  bool autotune = false;
  std::string output_dir = ".";
};

void apply(const RunOverrides& o, sisso::RunConfig& c) {
  if (o.workers) c.workers = *o.workers;
  if (o.precision) c.l0.precision = *o.precision == "fp32" ? sisso::Precision::fp32 : sisso::Precision::fp64;
  if (o.l0_batch_size) c.l0.batch_size = *o.l0_batch_size;
  if (o.n_sis_select) c.n_sis_select = *o.n_sis_select;
  if (o.on_the_fly) c.generation.materialize_last_rung = false;
  if (o.materialize) c.generation.materialize_last_rung = true;
  if (o.autotune) c.l0.autotune = true;
  c.check();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sisso::Error("cannot write '" + path.string() + "'");
  out << text;
}

void add_run_flags(CLI::App* cmd, RunOverrides& o) {
  cmd->add_option("--workers", o.workers, "Worker threads (0 = all hardware threads)");
  cmd->add_option("--precision", o.precision, "l0 arithmetic precision")
      ->check(CLI::IsMember({"fp32", "fp64"}));
  cmd->add_option("--l0-batch-size", o.l0_batch_size, "Tuples per l0 batch")->check(CLI::PositiveNumber);
  cmd->add_option("--n-sis-select", o.n_sis_select, "Features selected per SIS step")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--on-the-fly", o.on_the_fly, "Stream the last rung instead of storing it");
  cmd->add_flag("--materialize", o.materialize, "Store the last rung");
  cmd->add_flag("--autotune", o.autotune, "Time l0 chunk sizes on the first batch");
  cmd->add_option("--output-dir", o.output_dir, "Directory for model and timing files");
}

int execute(const sisso::RunConfig& config, const sisso::Dataset& data, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const sisso::PipelineResult result = sisso::run_pipeline(config, data);
  const std::string digest = sisso::config_digest(config);
  for (const auto& dim : result.dimensions) {
    write_file(out_dir / ("models_dim" + std::to_string(dim.dimension) + ".txt"),
               sisso::serialize_models(dim.models, digest));
    const sisso::Model& best = dim.models.front();
    std::cout << "dimension " << dim.dimension << ": subspace " << dim.subspace_size << ", "
              << dim.l0_stats.tuples_scored << " tuples, best mse " << best.mse << "\n";
    for (const auto& e : best.descriptor) std::cout << "  " << sisso::render(e) << "\n";
  }
  write_file(out_dir / "timings.txt", sisso::timings_report(result.times));
  std::cout << "features materialized: " << result.materialized_features << "\n";
  std::cout << sisso::timings_report(result.times);
  return kOk;
}

int cmd_run(const std::string& config_path, const RunOverrides& o) {
  sisso::RunConfig config = sisso::load_config(config_path);
  apply(o, config);
  const sisso::Dataset data = sisso::load_dataset(config.data_file, config.property_key, config.task_key);
  return execute(config, data, o.output_dir);
}

int cmd_count(const std::string& config_path, std::optional<std::size_t> primaries) {
  const sisso::RunConfig config = sisso::load_config(config_path);
  if (!primaries) {
    try {
      const auto header = sisso::read_header(config.data_file);
      std::size_t n = 0;
      for (const auto& cell : header) {
        if (cell.name != config.property_key && cell.name != config.task_key) ++n;
      }
      primaries = n;
    } catch (const sisso::Error& e) {
      std::cout << "feature bounds skipped: " << e.what() << " (pass --primaries)\n";
    }
  }
  if (primaries) {
    std::cout << "feature upper bounds (" << *primaries << " primaries)\n";
    const auto& ops = config.generation.operators;
    for (int r = 1; r <= config.generation.max_rung; ++r) {
      for (sisso::OpKind op : ops) {
        std::cout << "rung " << r << " " << sisso::op_info(op).name << " "
                  << sisso::count_upper_bound(*primaries, op, r) << "\n";
      }
      std::cout << "rung " << r << " all " << sisso::count_upper_bound(*primaries, ops, r) << "\n";
    }
  }
  std::cout << "l0 model counts (" << sisso::accounting_name(config.subspace_accounting)
            << " subspace accounting)\n";
  for (int d = 1; d <= config.dimension; ++d) {
    const std::size_t m = config.subspace_size_at(d);
    std::cout << "dimension " << d << " subspace " << m << " models "
              << sisso::count_models(m, static_cast<std::uint64_t>(d)) << "\n";
  }
  return kOk;
}

int cmd_validate(const std::string& config_path) {
  try {
    const sisso::RunConfig config = sisso::load_config(config_path);
    const sisso::Dataset data = sisso::load_dataset(config.data_file, config.property_key, config.task_key);
    sisso::check_against(config, data);
    const auto gen = config.generation_config();
    for (std::size_t p = 0; p < data.n_primaries(); ++p) {
      const auto v = sisso::validate_values(data.primary_values.row(p), gen);
      if (v != sisso::Validity::valid) {
        std::cout << "warning: primary '" << data.primaries[p].name
                  << "' fails value rules (" << sisso::validity_name(v) << ") and will be skipped\n";
      }
    }
    std::cout << "ok: " << data.n_samples() << " samples, " << data.n_primaries() << " primaries, "
              << data.tasks().n_tasks() << " task(s)\n";
    return kOk;
  } catch (const sisso::Error& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return kInvalid;
  }
}

struct BenchOptions {
  std::size_t primaries = 8;
  std::size_t samples = 200;
  std::size_t tasks = 1;
  std::uint64_t seed = 2024;
  std::string config;
  int max_rung = 2;
  int dimension = 2;
};

int cmd_bench(const BenchOptions& b, const RunOverrides& o) {
  sisso::SyntheticSpec spec;
  spec.n_primaries = b.primaries;
  spec.n_samples = b.samples;
  spec.n_tasks = b.tasks;
  spec.seed = b.seed;
  const sisso::Dataset data = sisso::make_synthetic_dataset(spec);

  sisso::RunConfig config;
  if (!b.config.empty()) {
    config = sisso::load_config(b.config);
  } else {
    config.generation.operators = {sisso::OpKind::add, sisso::OpKind::sub, sisso::OpKind::mul,
                                   sisso::OpKind::div, sisso::OpKind::sqrt, sisso::OpKind::sq};
    config.generation.max_rung = b.max_rung;
    config.dimension = b.dimension;
    config.n_sis_select = 20;
    config.n_residual = 5;
  }
  config.data_file = "synthetic.csv";
  config.property_key = "P";
  config.task_key = b.tasks > 1 ? "task" : "";
  apply(o, config);

  fs::create_directories(o.output_dir);
  write_file(fs::path(o.output_dir) / "synthetic.csv", sisso::to_csv(data));
  return execute(config, data, o.output_dir);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const sisso::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInvalid;
  } catch (const sisso::UnitParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kInvalid;
  } catch (const sisso::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kInvalid;
  } catch (const sisso::MissingColumn& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kInvalid;
  } catch (const sisso::NonFiniteData& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Descriptor search by feature creation, sure-independence screening and l0 fits"};
  app.require_subcommand(1);

  std::string config_path;
  RunOverrides run_opts;
  auto* run = app.add_subcommand("run", "Run the full pipeline");
  run->add_option("config", config_path, "JSON config file")->required();
  add_run_flags(run, run_opts);

  std::optional<std::size_t> primaries;
  auto* count = app.add_subcommand("count", "Print feature and model counts without searching");
  count->add_option("config", config_path, "JSON config file")->required();
  count->add_option("--primaries", primaries, "Primary feature count (default: from data header)");

  auto* validate = app.add_subcommand("validate", "Check config and data");
  validate->add_option("config", config_path, "JSON config file")->required();

  BenchOptions bench_opts;
  RunOverrides bench_run;
  auto* bench = app.add_subcommand("bench", "Run on generated planted-model data");
  bench->add_option("--primaries", bench_opts.primaries, "Primary features (>= 3)")->check(CLI::Range(3, 1000));
  bench->add_option("--samples", bench_opts.samples, "Samples")->check(CLI::PositiveNumber);
  bench->add_option("--tasks", bench_opts.tasks, "Tasks")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_opts.seed, "Generator seed");
  bench->add_option("--config", bench_opts.config, "Config to take search settings from");
  bench->add_option("--max-rung", bench_opts.max_rung, "Maximum rung (without --config)");
  bench->add_option("--dimension", bench_opts.dimension, "Descriptor dimension (without --config)");
  add_run_flags(bench, bench_run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  if (*run) return guarded([&] { return cmd_run(config_path, run_opts); });
  if (*count) return guarded([&] { return cmd_count(config_path, primaries); });
  if (*validate) return guarded([&] { return cmd_validate(config_path); });
  if (*bench) return guarded([&] { return cmd_bench(bench_opts, bench_run); });
  return kInvalid;
}
