#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace classagg {

enum class ErrorKind {
  InvalidParams,
  NotSurjective,
  BadLength,
  BadCategory,
  IndexOutOfRange,
  BudgetExceeded,
  NoWitness,
  PreconditionFailed,
  NotABijection,
  VerificationFailed,
  HypothesisViolated,
  SchemaError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a computation would exceed its configured budget. `estimate`
/// is the size of the space that was requested (0 when unknown).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& message, unsigned long long estimate)
      : Error(ErrorKind::BudgetExceeded, message), estimate_(estimate) {}

  unsigned long long estimate() const noexcept { return estimate_; }

 private:
  unsigned long long estimate_;
};

}  // namespace classagg
