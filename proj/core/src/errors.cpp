#include "slowvol/errors.hpp"

namespace slowvol {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::non_invertible_generator: return "NonInvertibleGenerator";
    case ErrorKind::not_unitriangular: return "NotUnitriangular";
    case ErrorKind::series_too_short: return "SeriesTooShort";
    case ErrorKind::zero_covector: return "ZeroCovector";
    case ErrorKind::energy_drift_exceeded: return "EnergyDriftExceeded";
    case ErrorKind::constraint_violation: return "ConstraintViolation";
    case ErrorKind::non_positive_hamiltonian: return "NonPositiveH";
    case ErrorKind::malformed_descriptor: return "MalformedDescriptor";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::config_error: return "ConfigError";
    case ErrorKind::arithmetic_overflow: return "ArithmeticOverflow";
    case ErrorKind::internal_error: return "InternalError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(message) {}

}  // namespace slowvol
