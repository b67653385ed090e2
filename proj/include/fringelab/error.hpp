#pragma once

#include <stdexcept>
#include <string>

namespace fringelab {

/// Invalid configuration or argument (CLI exit code 1).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A discretization is too coarse for the requested accuracy.
class SamplingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace fringelab
