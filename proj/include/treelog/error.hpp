#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treelog {

enum class ErrorCode {
  OrderRequired,
  UnknownLabel,
  UnknownSymbol,
  NotASubschema,
  SyntaxError,
  SafetyError,
  DomainError,
  UnboundVariable,
  WrongFreeVariableShape,
  BudgetExceeded,
  NotUnary,
  NotValidated,
  WrongShape,
  NotASingleTree,
  UnsupportedAtom,
  StateBudgetExceeded,
  AlphabetMismatch,
  InvalidTree,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure reported by the library. The code is
/// stable and what tests and the CLI dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Positioned parse failure; line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::SyntaxError, std::to_string(line) + ":" +
                                          std::to_string(column) + ": " +
                                          message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace treelog
