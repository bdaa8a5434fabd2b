#pragma once

#include <stdexcept>
#include <string>

namespace potlayer {

/// Argument outside the mathematical domain of an operation (r outside (0,1],
/// a point outside the ball or chart).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid parameters or malformed inputs.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation at a kernel singularity (x = y, x = 0 for the fundamental solution).
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantity that only exists for Dini moduli was requested for a divergent one.
class DivergentModulusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace potlayer
