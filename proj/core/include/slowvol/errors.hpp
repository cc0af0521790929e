#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slowvol {

enum class ErrorKind {
  budget_exceeded,
  non_invertible_generator,
  not_unitriangular,
  series_too_short,
  zero_covector,
  energy_drift_exceeded,
  constraint_violation,
  non_positive_hamiltonian,
  malformed_descriptor,
  invalid_argument,
  parse_error,
  config_error,
  arithmetic_overflow,
  internal_error,
};

std::string_view to_string(ErrorKind kind);

// Base of every error raised by the library. The kind is stable and is what
// the CLI reports in the summary table.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  // what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

template <ErrorKind K>
class KindedError : public Error {
 public:
  explicit KindedError(const std::string& message) : Error(K, message) {}
};

using NonInvertibleGenerator = KindedError<ErrorKind::non_invertible_generator>;
using NotUnitriangular = KindedError<ErrorKind::not_unitriangular>;
using SeriesTooShort = KindedError<ErrorKind::series_too_short>;
using ZeroCovector = KindedError<ErrorKind::zero_covector>;
using EnergyDriftExceeded = KindedError<ErrorKind::energy_drift_exceeded>;
using ConstraintViolation = KindedError<ErrorKind::constraint_violation>;
using NonPositiveH = KindedError<ErrorKind::non_positive_hamiltonian>;
using MalformedDescriptor = KindedError<ErrorKind::malformed_descriptor>;
using InvalidArgument = KindedError<ErrorKind::invalid_argument>;
using ParseError = KindedError<ErrorKind::parse_error>;
using ConfigError = KindedError<ErrorKind::config_error>;
using ArithmeticOverflow = KindedError<ErrorKind::arithmetic_overflow>;
using InternalError = KindedError<ErrorKind::internal_error>;

// Budget exhaustion is an expected outcome for exponentially growing inputs,
// so it carries how far the computation got before giving up.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& message, double reached, std::size_t size)
      : Error(ErrorKind::budget_exceeded, message), reached_(reached), size_(size) {}

  // Word length (groups) or flow time (volumes) at which the budget ran out.
  double reached() const noexcept { return reached_; }
  std::size_t size() const noexcept { return size_; }

 private:
  double reached_;
  std::size_t size_;
};

}  // namespace slowvol
