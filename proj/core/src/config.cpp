// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sisso/error.hpp"

namespace sisso {

using json = nlohmann::json;

std::string_view accounting_name(SubspaceAccounting a) noexcept {
  return a == SubspaceAccounting::total ? "total" : "per_iteration";
}

std::size_t RunConfig::sis_select_at(int d) const noexcept {
  return subspace_size_at(d) - subspace_size_at(d - 1);
}

std::size_t RunConfig::subspace_size_at(int d) const noexcept {
  if (d <= 0) return 0;
  if (subspace_accounting == SubspaceAccounting::per_iteration) {
    return n_sis_select * static_cast<std::size_t>(d);
  }
  // Spread the total as evenly as possible, reaching it exactly at d = dimension.
  const auto dd = static_cast<std::size_t>(std::min(d, dimension));
  return n_sis_select * dd / static_cast<std::size_t>(dimension);
}

GenerationConfig RunConfig::generation_config() const {
  GenerationConfig g = generation;
  g.workers = workers;
  return g;
}

L0Config RunConfig::l0_config(int d) const {
  L0Config c = l0;
  c.dimension = d;
  c.workers = workers;
  return c;
}

void RunConfig::check() const {
  if (data_file.empty()) throw ConfigError("data_file", "is required");
  if (property_key.empty()) throw ConfigError("property_key", "is required");
  if (!task_key.empty() && task_key == property_key) {
    throw ConfigError("task_key", "must differ from property_key");
  }
  generation.check();
  if (dimension < 1) throw ConfigError("dimension", "must be >= 1");
  if (n_sis_select < 1) throw ConfigError("n_sis_select", "must be >= 1");
  if (subspace_accounting == SubspaceAccounting::total &&
      n_sis_select < static_cast<std::size_t>(dimension)) {
    throw ConfigError("n_sis_select", "total accounting needs at least one feature per dimension");
  }
  if (n_residual < 1) throw ConfigError("n_residual", "must be >= 1");
  L0Config l = l0;
  l.dimension = dimension;
  l.check();
  if (l0.n_models_store < n_residual) {
    throw ConfigError("n_models_store", "must be >= n_residual");
  }
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "data_file",         "property_key",     "task_key",         "operators",
      "max_rung",          "dimension",        "n_sis_select",     "subspace_accounting",
      "n_residual",        "min_abs_value",    "max_abs_value",    "materialize_last_rung",
      "value_batch_size",  "l0_batch_size",    "precision",        "n_models_store",
      "autotune",          "workers",          "dedup_tolerance",  "memory_budget_mb",
      "l0_chunk_size",     "l0_chunk_candidates",
  };
  return keys;
}

template <typename T>
T get(const json& doc, const char* key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, unsigned> ||
                  std::is_same_v<T, int>) {
      if (!it->is_number_integer()) throw ConfigError(key, "must be an integer");
      if constexpr (!std::is_same_v<T, int>) {
        if (it->get<std::int64_t>() < 0) throw ConfigError(key, "must be non-negative");
      }
    } else if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw ConfigError(key, "must be a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError(key, "must be true or false");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigError(key, "must be a string");
    }
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  }

  RunConfig c;
  const std::string data = get<std::string>(doc, "data_file", "");
  if (!data.empty()) {
    std::filesystem::path p(data);
    c.data_file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  c.property_key = get<std::string>(doc, "property_key", "");
  c.task_key = get<std::string>(doc, "task_key", "");

  GenerationConfig& g = c.generation;
  if (auto it = doc.find("operators"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("operators", "must be a list of operator names");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& v = (*it)[i];
      const std::string key = "operators[" + std::to_string(i) + "]";
      if (!v.is_string()) throw ConfigError(key, "must be a string");
      auto op = op_from_name(v.get<std::string>());
      if (!op) {
        throw ConfigError(key, "unknown operator '" + v.get<std::string>() + "'; valid: " +
                                   std::string(operator_name_list()));
      }
      g.operators.push_back(*op);
    }
  }
  g.max_rung = get<int>(doc, "max_rung", g.max_rung);
  g.min_abs_value = get<double>(doc, "min_abs_value", g.min_abs_value);
  g.max_abs_value = get<double>(doc, "max_abs_value", g.max_abs_value);
  g.materialize_last_rung = get<bool>(doc, "materialize_last_rung", g.materialize_last_rung);
  g.value_batch_size = get<std::size_t>(doc, "value_batch_size", g.value_batch_size);
  g.dedup_tolerance = get<double>(doc, "dedup_tolerance", g.dedup_tolerance);
  g.memory_budget_bytes =
      get<std::size_t>(doc, "memory_budget_mb", g.memory_budget_bytes >> 20) << 20;

  c.dimension = get<int>(doc, "dimension", c.dimension);
  c.n_sis_select = get<std::size_t>(doc, "n_sis_select", c.n_sis_select);
  const std::string acc = get<std::string>(doc, "subspace_accounting", "per_iteration");
  if (acc == "per_iteration") {
    c.subspace_accounting = SubspaceAccounting::per_iteration;
  } else if (acc == "total") {
    c.subspace_accounting = SubspaceAccounting::total;
  } else {
    throw ConfigError("subspace_accounting", "must be \"per_iteration\" or \"total\"");
  }
  c.n_residual = get<std::size_t>(doc, "n_residual", c.n_residual);

  L0Config& l = c.l0;
  l.batch_size = get<std::size_t>(doc, "l0_batch_size", l.batch_size);
  const std::string prec = get<std::string>(doc, "precision", "fp64");
  if (prec == "fp64") {
    l.precision = Precision::fp64;
  } else if (prec == "fp32") {
    l.precision = Precision::fp32;
  } else {
    throw ConfigError("precision", "must be \"fp32\" or \"fp64\"");
  }
  l.n_models_store = get<std::size_t>(doc, "n_models_store", std::max<std::size_t>(10, c.n_residual));
  l.autotune = get<bool>(doc, "autotune", l.autotune);
  l.chunk_size = get<std::size_t>(doc, "l0_chunk_size", l.chunk_size);
  if (auto it = doc.find("l0_chunk_candidates"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("l0_chunk_candidates", "must be a list of integers");
    l.chunk_candidates.clear();
    for (const auto& v : *it) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw ConfigError("l0_chunk_candidates", "entries must be positive integers");
      }
      l.chunk_candidates.push_back(v.get<std::size_t>());
    }
  }
  l.dimension = c.dimension;
  c.workers = get<unsigned>(doc, "workers", c.workers);

  c.check();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

namespace {

json operators_json(const GenerationConfig& g) {
  json ops = json::array();
  for (OpKind op : g.operators) ops.push_back(std::string(op_info(op).name));
  return ops;
}

json result_settings(const RunConfig& c) {
  return json{
      {"data_file", c.data_file.filename().string()},
      {"property_key", c.property_key},
      {"task_key", c.task_key},
      {"operators", operators_json(c.generation)},
      {"max_rung", c.generation.max_rung},
      {"dimension", c.dimension},
      {"n_sis_select", c.n_sis_select},
      {"subspace_accounting", std::string(accounting_name(c.subspace_accounting))},
      {"n_residual", c.n_residual},
      {"min_abs_value", c.generation.min_abs_value},
      {"max_abs_value", c.generation.max_abs_value},
      {"dedup_tolerance", c.generation.dedup_tolerance},
      {"precision", std::string(precision_name(c.l0.precision))},
      {"n_models_store", c.l0.n_models_store},
  };
}

}  // namespace

std::string config_to_json(const RunConfig& c) {
  json doc = result_settings(c);
  doc["data_file"] = c.data_file.string();
  doc["materialize_last_rung"] = c.generation.materialize_last_rung;
  doc["value_batch_size"] = c.generation.value_batch_size;
  doc["memory_budget_mb"] = c.generation.memory_budget_bytes >> 20;
  doc["l0_batch_size"] = c.l0.batch_size;
  doc["l0_chunk_size"] = c.l0.chunk_size;
  doc["l0_chunk_candidates"] = c.l0.chunk_candidates;
  doc["autotune"] = c.l0.autotune;
  doc["workers"] = c.workers;
  return doc.dump(2) + "\n";
}

std::string config_digest(const RunConfig& c) {
  // materialize_last_rung is excluded too: both modes select the same features.
  const std::string text = result_settings(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void check_against(const RunConfig& config, const Dataset& data) {
  const TaskPartition tasks = data.tasks();
  const std::size_t need = static_cast<std::size_t>(config.dimension) + 2;
  for (std::size_t t = 0; t < tasks.n_tasks(); ++t) {
    if (tasks.slices[t].size() < need) {
      throw ConfigError(config.task_key.empty() ? "dimension" : config.task_key,
                        "task '" + tasks.names[t] + "' has " +
                            std::to_string(tasks.slices[t].size()) + " samples, needs at least " +
                            std::to_string(need) + " (dimension + 2)");
    }
  }
  if (data.n_primaries() == 0) throw ConfigError("data_file", "no primary feature columns");
}

}  // namespace sisso
