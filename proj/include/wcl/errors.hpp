#pragma once

#include <stdexcept>
#include <string>

namespace wcl {

// Operands of different dimension n were combined.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An argument lies outside the domain where an operation is defined.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Result not representable in double precision (e.g. e^v for huge v).
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// An iterative procedure did not converge within its cap.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A consistency precondition on user-supplied data failed.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wcl
