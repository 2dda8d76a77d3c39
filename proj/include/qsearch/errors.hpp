#pragma once

#include <stdexcept>
#include <string>

namespace qsearch {

// Invalid argument or index outside the operator's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An input violated an operation's precondition (e.g. a non-normalized state).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A reversible circuit left its ancillas entangled with the data register.
class CircuitContractError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Request exceeds the dense-audit or state-vector memory guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsearch
