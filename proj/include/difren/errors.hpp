#pragma once

#include <stdexcept>
#include <string>

namespace difren {

/// Base class for all library errors. `code()` is a stable machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Input violates an operation's precondition (dimension mismatch, window, class).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message, std::string code = "domain_error")
      : Error(std::move(code), message) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("parse_error", message + " at line " + std::to_string(line) + ", column " +
                                 std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Quadrature or extrapolation did not converge. Carries the partial value.
class NumericError : public Error {
 public:
  NumericError(const std::string& message, double partial)
      : Error("numeric_failure", message), partial_(partial) {}
  double partial() const noexcept { return partial_; }

 private:
  double partial_;
};

}  // namespace difren
