#pragma once

#include <stdexcept>
#include <string>

namespace qmg {

// Input outside a function's domain (bad dimensions, non-Hermitian, lookup off a table).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction was checked and does not satisfy its contract.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundedError : public SolverError {
 public:
  using SolverError::SolverError;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result that a theorem guarantees came out false.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qmg
