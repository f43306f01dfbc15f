#pragma once

#include <stdexcept>
#include <string>

namespace gutscat {

/// Raised when an input violates a documented precondition (malformed
/// files, inadmissible vectors, out-of-range parameters).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency check fails. Seeing one of these
/// means a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a search or enumeration would exceed its configured budget.
class GuardError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace gutscat
