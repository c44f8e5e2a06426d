#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stdgm {

enum class ErrorKind {
  schema,
  parse,
  empty_input,
  degenerate_window,
  out_of_range,
  parameter,
  domain,
  contract,
  conditioning,
  singular,
  symmetry,
  io,
  usage,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure the library reports. `kind` is stable and
/// is what the CLI writes into its machine-readable error report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure tied to a line of an input file (1-based, header is line 1).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Per-frequency failure; carries the linear grid index where it happened.
class GridPointError : public Error {
 public:
  GridPointError(ErrorKind kind, std::size_t grid_index, const std::string& what)
      : Error(kind, what + " (grid index " + std::to_string(grid_index) + ")"), index_(grid_index) {}
  std::size_t grid_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace stdgm
