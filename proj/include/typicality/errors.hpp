#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace typicality {

// A symmetric matrix failed to factorize. `pivot` is the index of the first
// diagonal pivot the Cholesky sweep found non-positive (or non-finite).
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(long pivot, const std::string& context = "")
      : std::runtime_error(context.empty()
                               ? "matrix is not positive definite (pivot " +
                                     std::to_string(pivot) + ")"
                               : context + ": matrix is not positive definite (pivot " +
                                     std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  long pivot() const { return pivot_; }

 private:
  long pivot_;
};

// Input file could not be opened or read at all.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file opened but its contents are malformed. `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Cleaning / imputing / standardizing failed; the message names the column.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string column, const std::string& what)
      : std::runtime_error("column '" + column + "': " + what),
        column_(std::move(column)) {}

  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

}  // namespace typicality
