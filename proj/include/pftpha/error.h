#ifndef PFTPHA_ERROR_H_
#define PFTPHA_ERROR_H_

#include <stdexcept>
#include <string>

namespace pftpha {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL or theory text. Carries the 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  int line() const { return line_; }
  int column() const { return column_; }
  /// The message without the position prefix.
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

/// A structurally invalid model or theory was passed to an operation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain (negative rate or time).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Failure during search or measure computation.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// The search frontier or expansion budget was exhausted.
class BudgetExceeded : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

}  // namespace pftpha

#endif  // PFTPHA_ERROR_H_
