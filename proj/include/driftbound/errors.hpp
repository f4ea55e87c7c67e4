#pragma once

#include <stdexcept>
#include <string>

namespace driftbound {

// Parameters outside the admissible range of an operation.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where a formula is defined (zeta at w <= 1,
// tail bound below its threshold, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A constant in a bound chain is not representable as a finite double.
class OverflowError : public std::overflow_error {
 public:
  OverflowError(std::string constant, const std::string& what)
      : std::overflow_error(what), constant_(std::move(constant)) {}

  const std::string& constant() const noexcept { return constant_; }

 private:
  std::string constant_;
};

// A configured resource limit (support size, state magnitude) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested operation is not defined for this kind of process.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace driftbound
