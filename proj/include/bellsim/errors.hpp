#pragma once

#include <stdexcept>
#include <string>

namespace bellsim {

// Bad user input: unknown model, malformed file, inconsistent flags.
// The CLI maps this (and std::domain_error) to exit code 2.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An integrand produced a non-finite value; carries the offending node.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double lambda)
      : std::runtime_error(what), lambda(lambda) {}
  double lambda;
};

}  // namespace bellsim
