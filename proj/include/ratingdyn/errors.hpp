#pragma once

#include <stdexcept>
#include <string>

namespace ratingdyn {

// A value or parameter violates a domain-type invariant.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested operation does not apply to this kind of model, e.g. the
// closed-form equilibrium of a kernel that depends on the observed average.
class ModelKindError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to meet its tolerance or found the model
// degenerate (every point a fixed point, no bracket, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateModelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ratingdyn
