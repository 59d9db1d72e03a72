// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "sisso/error.hpp"

namespace sisso {

std::vector<double> predict(const Model& model, const Matrix<double>& descriptor_values,
                            const TaskPartition& tasks) {
  const std::size_t n = model.coefficients.cols() - 1;
  if (descriptor_values.rows() != n) throw std::invalid_argument("predict: descriptor size mismatch");
  if (model.coefficients.rows() != tasks.n_tasks()) {
    throw std::invalid_argument("predict: model and data have different task counts");
  }
  std::vector<double> out(tasks.n_samples());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto c = model.coefficients.row(tasks.task_of[s]);
    double v = c[n];
    for (std::size_t j = 0; j < n; ++j) v += c[j] * descriptor_values(j, s);
    out[s] = v;
  }
  return out;
}

std::vector<double> predict(const Model& model, const Dataset& data) {
  Matrix<double> values(0, data.n_samples());
  for (const auto& e : model.descriptor) {
    values.push_row(evaluate_as<double>(e, data.primary_values));
  }
  return predict(model, values, data.tasks());
}

ScreeningTarget residuals(std::span<const Model> models, const Dataset& data) {
  if (models.empty()) throw std::invalid_argument("residuals: need at least one model");
  ScreeningTarget out;
  out.tasks = data.tasks();
  for (const auto& m : models) {
    const std::vector<double> p = predict(m, data);
    std::vector<double> r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = data.property[i] - p[i];
    out.targets.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

bool read_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool read_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

}  // namespace

std::string serialize_model(const Model& model, std::size_t rank, std::string_view config_digest) {
  std::string out;
  out += "model " + std::to_string(rank) + "\n";
  out += "dimension " + std::to_string(model.descriptor.size()) + "\n";
  out += "mse " + format_double(model.mse) + "\n";
  out += "config_digest " + std::string(config_digest) + "\n";
  for (const auto& e : model.descriptor) out += "feature " + render(e) + "\n";
  for (std::size_t t = 0; t < model.coefficients.rows(); ++t) {
    out += "task " + (t < model.task_names.size() ? model.task_names[t] : std::string("all"));
    out += " " + std::to_string(t < model.task_sizes.size() ? model.task_sizes[t] : 0);
    out += " " + format_double(t < model.rmse_per_task.size() ? model.rmse_per_task[t] : 0.0);
    for (double c : model.coefficients.row(t)) out += " " + format_double(c);
    out += "\n";
  }
  out += "end\n";
  return out;
}

std::string serialize_models(std::span<const Model> models, std::string_view config_digest) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) out += serialize_model(models[i], i, config_digest);
  return out;
}

std::vector<ModelRecord> parse_model_records(std::string_view text) {
  std::vector<ModelRecord> out;
  ModelRecord* cur = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> void {
    throw ParseError("model record line " + std::to_string(line_no) + ": " + why);
  };
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::size_t sp = line.find(' ');
    const std::string_view tag = line.substr(0, sp);
    const std::string_view rest = sp == std::string_view::npos ? "" : line.substr(sp + 1);

    if (tag == "model") {
      if (cur) fail("nested model record");
      out.emplace_back();
      cur = &out.back();
      if (!read_size(rest, cur->rank)) fail("bad rank");
      continue;
    }
    if (!cur) fail("data outside a model record");
    if (tag == "end") {
      if (cur->features.size() != cur->dimension) fail("feature count differs from dimension");
      cur = nullptr;
    } else if (tag == "dimension") {
      if (!read_size(rest, cur->dimension)) fail("bad dimension");
    } else if (tag == "mse") {
      if (!read_double(rest, cur->mse)) fail("bad mse");
    } else if (tag == "config_digest") {
      cur->config_digest = std::string(rest);
    } else if (tag == "feature") {
      cur->features.emplace_back(rest);
    } else if (tag == "task") {
      const auto w = words(rest);
      if (w.size() != 3 + cur->dimension + 1) fail("task line needs name, size, rmse and coefficients");
      ModelRecord::Task task;
      task.name = std::string(w[0]);
      if (!read_size(w[1], task.n_samples)) fail("bad task size");
      if (!read_double(w[2], task.rmse)) fail("bad rmse");
      for (std::size_t i = 3; i < w.size(); ++i) {
        double c = 0.0;
        if (!read_double(w[i], c)) fail("bad coefficient");
        task.coefficients.push_back(c);
      }
      cur->tasks.push_back(std::move(task));
    } else {
      fail("unknown tag '" + std::string(tag) + "'");
    }
  }
  if (cur) throw ParseError("model record not terminated by 'end'");
  return out;
}

Model model_from_record(const ModelRecord& record, std::span<const PrimaryFeature> primaries) {
  Model m;
  for (const auto& f : record.features) m.descriptor.push_back(parse_expression(f, primaries));
  m.mse = record.mse;
  m.coefficients = Matrix<double>(record.tasks.size(), record.dimension + 1);
  for (std::size_t t = 0; t < record.tasks.size(); ++t) {
    m.task_names.push_back(record.tasks[t].name);
    m.task_sizes.push_back(record.tasks[t].n_samples);
    m.rmse_per_task.push_back(record.tasks[t].rmse);
    for (std::size_t j = 0; j <= record.dimension; ++j) m.coefficients(t, j) = record.tasks[t].coefficients[j];
  }
  return m;
}

}  // namespace sisso
