// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sisso {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class UnitErrorKind { mismatched_addition, requires_dimensionless };

class UnitError : public Error {
 public:
  UnitError(UnitErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  UnitErrorKind kind() const noexcept { return kind_; }

 private:
  UnitErrorKind kind_;
};

class UnitParseError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(std::string column)
      : Error("missing column '" + column + "'"), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

/// A NaN or infinite entry in the input data. Coordinates are 1-based data
/// row (header excluded) and 0-based column.
class NonFiniteData : public Error {
 public:
  NonFiniteData(std::size_t row, std::size_t column, const std::string& column_name)
      : Error("non-finite value at data row " + std::to_string(row) + ", column " +
              std::to_string(column) + " ('" + column_name + "')"),
        row_(row),
        column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& reason)
      : Error("config key '" + key + "': " + reason), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class EmptySpace : public Error {
 public:
  using Error::Error;
};

class RankOutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace sisso
