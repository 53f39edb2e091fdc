#pragma once

#include <stdexcept>
#include <string>

namespace entroact {

/// Argument outside its documented domain (bad space tag, eps <= 0, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured budget (grid points, word count, oracle size) would be
/// exceeded. The message names the budget and suggests a remediation.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A provable internal invariant failed. Always a bug, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::logic_error(what) {}
};

/// Too few usable data points to fit an estimate.
class InsufficientData : public std::runtime_error {
 public:
  explicit InsufficientData(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace entroact
