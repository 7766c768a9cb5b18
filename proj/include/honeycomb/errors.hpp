#pragma once

#include <stdexcept>
#include <string>

namespace honeycomb {

/// Invalid argument or violated precondition (nonpositive lengths, aliasing, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An eigensolve, fit or conservation monitor failed numerically.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency check failed (e.g. an index map did not land on integers).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotADiracPoint : public NumericalError {
 public:
  NotADiracPoint(const std::string& what, int multiplicity)
      : NumericalError(what), multiplicity_(multiplicity) {}
  int multiplicity() const noexcept { return multiplicity_; }

 private:
  int multiplicity_;
};

class SymmetryViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConeFitFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed or missing configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace honeycomb
