// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "sisso/error.hpp"

namespace sisso {

TaskPartition TaskPartition::single(std::size_t n_samples) {
  TaskPartition p;
  p.names = {"all"};
  p.task_of.assign(n_samples, 0);
  p.slices.resize(1);
  p.slices[0].resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) p.slices[0][i] = i;
  return p;
}

TaskPartition TaskPartition::from_labels(std::span<const std::string> labels) {
  TaskPartition p;
  std::map<std::string, std::uint32_t, std::less<>> ids;
  p.task_of.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = ids.try_emplace(labels[i], static_cast<std::uint32_t>(p.names.size()));
    if (inserted) {
      p.names.push_back(labels[i]);
      p.slices.emplace_back();
    }
    p.task_of.push_back(it->second);
    p.slices[it->second].push_back(i);
  }
  return p;
}

std::size_t TaskPartition::smallest_task() const noexcept {
  std::size_t out = std::numeric_limits<std::size_t>::max();
  for (const auto& s : slices) out = std::min(out, s.size());
  return slices.empty() ? 0 : out;
}

TaskPartition Dataset::tasks() const {
  if (task_labels.empty()) return TaskPartition::single(n_samples());
  return TaskPartition::from_labels(task_labels);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(delim, pos);
    if (next == std::string_view::npos) {
      out.push_back(trim(line.substr(pos)));
      return out;
    }
    out.push_back(trim(line.substr(pos, next - pos)));
    pos = next + 1;
  }
}

// Names end up in rendered expressions, so they must not contain characters
// the expression grammar reserves.
void check_name(std::string_view name, std::string_view cell) {
  bool ok = !name.empty() && name.front() != '-';
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '(' || c == ')' || c == '|' || c == '^' || c == ',') ok = false;
  }
  if (!ok) throw ParseError("invalid column name in header cell '" + std::string(cell) + "'");
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  // from_chars reports overflow as result_out_of_range; treat as infinite data.
  if (ec == std::errc::result_out_of_range && ptr == last) {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

HeaderCell parse_header_cell(std::string_view cell) {
  cell = trim(cell);
  HeaderCell out;
  const std::size_t open = cell.find('(');
  if (open == std::string_view::npos) {
    check_name(cell, cell);
    out.name = std::string(cell);
    return out;
  }
  if (cell.back() != ')') throw ParseError("unterminated unit in header cell '" + std::string(cell) + "'");
  const std::string_view name = trim(cell.substr(0, open));
  check_name(name, cell);
  out.name = std::string(name);
  out.unit = parse_unit(cell.substr(open + 1, cell.size() - open - 2));
  return out;
}

Dataset parse_dataset(std::string_view text, std::string_view property_column,
                      std::string_view task_column) {
  std::vector<std::string_view> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      const std::string_view line = text.substr(pos, nl - pos);
      if (!trim(line).empty()) lines.push_back(line);
      pos = nl + 1;
    }
  }
  if (lines.empty()) throw ParseError("data file is empty (header row is mandatory)");

  const char delim = lines[0].find('\t') != std::string_view::npos ? '\t' : ',';
  const std::vector<std::string_view> header = split(lines[0], delim);
  if (header.size() < 2) throw ParseError("header needs a sample id column and at least one more");

  Dataset data;
  std::vector<HeaderCell> cells;
  cells.reserve(header.size());
  for (std::size_t c = 1; c < header.size(); ++c) cells.push_back(parse_header_cell(header[c]));

  std::ptrdiff_t property_col = -1;
  std::ptrdiff_t task_col = -1;
  std::vector<std::size_t> primary_cols;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].name == property_column) {
      property_col = static_cast<std::ptrdiff_t>(c);
    } else if (!task_column.empty() && cells[c].name == task_column) {
      task_col = static_cast<std::ptrdiff_t>(c);
    } else {
      primary_cols.push_back(c);
    }
  }
  if (property_col < 0) throw MissingColumn(std::string(property_column));
  if (!task_column.empty() && task_col < 0) throw MissingColumn(std::string(task_column));

  data.property_name = cells[property_col].name;
  data.property_unit = cells[property_col].unit;
  for (std::size_t c : primary_cols) data.primaries.push_back({cells[c].name, cells[c].unit});

  const std::size_t n_rows = lines.size() - 1;
  data.primary_values = Matrix<double>(primary_cols.size(), n_rows);
  data.property.resize(n_rows);
  data.sample_ids.reserve(n_rows);

  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::vector<std::string_view> fields = split(lines[r + 1], delim);
    if (fields.size() != header.size()) {
      throw ParseError("data row " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    data.sample_ids.emplace_back(fields[0]);
    auto number = [&](std::size_t c) {
      double v = 0.0;
      if (!parse_double(fields[c + 1], v)) {
        throw ParseError("data row " + std::to_string(r + 1) + ", column '" + cells[c].name +
                         "': not a number: '" + std::string(fields[c + 1]) + "'");
      }
      if (!std::isfinite(v)) throw NonFiniteData(r + 1, c + 1, cells[c].name);
      return v;
    };
    for (std::size_t p = 0; p < primary_cols.size(); ++p) data.primary_values(p, r) = number(primary_cols[p]);
    data.property[r] = number(static_cast<std::size_t>(property_col));
    if (task_col >= 0) data.task_labels.emplace_back(fields[task_col + 1]);
  }
  for (const auto& label : data.task_labels) {
    if (label.empty() || label.find_first_of(" \t") != std::string::npos) {
      throw ParseError("task label '" + label + "' must be non-empty and contain no whitespace");
    }
  }
  return data;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open data file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, std::string_view property_column,
                     std::string_view task_column) {
  return parse_dataset(read_file(path), property_column, task_column);
}

std::vector<HeaderCell> read_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open data file '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line) && trim(line).empty()) {
  }
  if (trim(line).empty()) throw ParseError("data file is empty (header row is mandatory)");
  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  const auto header = split(line, delim);
  std::vector<HeaderCell> out;
  for (std::size_t c = 1; c < header.size(); ++c) out.push_back(parse_header_cell(header[c]));
  return out;
}

std::string to_csv(const Dataset& data, std::string_view task_column) {
  auto cell = [](const std::string& name, const Unit& unit) {
    return unit.dimensionless() ? name : name + " (" + unit.to_string() + ")";
  };
  auto num = [](double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  std::string out = "id";
  for (const auto& p : data.primaries) out += "," + cell(p.name, p.unit);
  out += "," + cell(data.property_name, data.property_unit);
  if (!data.task_labels.empty()) out += "," + std::string(task_column);
  out += '\n';
  for (std::size_t r = 0; r < data.n_samples(); ++r) {
    out += data.sample_ids[r];
    for (std::size_t p = 0; p < data.n_primaries(); ++p) out += "," + num(data.primary_values(p, r));
    out += "," + num(data.property[r]);
    if (!data.task_labels.empty()) out += "," + data.task_labels[r];
    out += '\n';
  }
  return out;
}

}  // namespace sisso
