#ifndef SZILARD_ERRORS_HPP
#define SZILARD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace szilard {

// Inputs that do not describe a valid object (bad simplex vector, mismatched
// alphabets, zero weights where full support is required).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDistribution : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroWeight : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A strategy that puts zero weight on some outcome exposes Alice to an
// unbounded loss; rejected rather than clamped.
class ZeroStrategyWeight : public ZeroWeight {
 public:
  using ZeroWeight::ZeroWeight;
};

// Valid objects, but the requested quantity is undefined or unavailable.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SupportMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class Degenerate : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedAlphabet : public DomainError {
 public:
  using DomainError::DomainError;
};

class TooLarge : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoFeasibleType : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace szilard

#endif  // SZILARD_ERRORS_HPP
