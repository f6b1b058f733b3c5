#pragma once

#include <stdexcept>
#include <string>

namespace quasispec {

/// Base class of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, dimension mismatches, violated preconditions.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver non-convergence, size caps, truncation that cannot be trusted.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LightConeViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace quasispec
