#pragma once

#include <stdexcept>
#include <string>

namespace qpart {

// Error in QASM text, with 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Malformed hypergraph exchange file or partition file.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& message) : std::runtime_error(message) {}
};

// Invalid or unknown entry in a harness config file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// External solver invocation failure.
class SolverError : public std::runtime_error {
 public:
  enum class Kind { SpawnFailed, NonZeroExit, Timeout, BadOutput };

  SolverError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace qpart
