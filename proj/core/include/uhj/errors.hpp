#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uhj {

/// Malformed or inconsistent input: dimension mismatch, non-finite data,
/// dependent constraints, bad configuration values.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies outside the region where a map is defined (a section
/// leaving its chart, a square root of a negative number, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The integrator met a non-finite field value.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace uhj
