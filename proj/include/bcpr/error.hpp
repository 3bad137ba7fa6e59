#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bcpr {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  LengthMismatch,
  SingleClass,
  DegenerateSplit,
  ZeroMass,
  Degenerate,
  DegenerateHyperplane,
  EmptySelection,
  SubsetSingleClass,
  GenerationStalled,
  InvalidGamma,
  DivergenceDetected,
  MissingLabelColumn,
  EmptyFile,
  ParseError,
  SingleClassAfterMapping,
  UnknownColumn,
  SchemaViolation,
  VersionMismatch,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Row/column positions are 1-based data rows (header excluded) and 0-based columns.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& what)
      : Error(ErrorCode::ParseError,
              "row " + std::to_string(row) + ", column '" + column + "': " + what),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace bcpr
