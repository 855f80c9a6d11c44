#pragma once

#include <stdexcept>
#include <string>

namespace invh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed source text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Undeclared variables, duplicate declarations or labels, unknown labels.
class ScopeError : public Error {
 public:
  using Error::Error;
};

/// Input rejected before any verification work, e.g. an impure candidate.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace invh
