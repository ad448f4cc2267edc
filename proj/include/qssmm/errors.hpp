#pragma once

#include <stdexcept>
#include <string>

namespace qssmm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Vector lengths that do not agree with the grid or with each other.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Invalid physical or numerical parameters. `field()` names the offending key
/// and `line()` is the 1-based config line, or 0 when not file-backed.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& message, std::string field = {}, int line = 0)
      : Error(message), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

private:
  std::string field_;
  int line_;
};

/// Non-finite values or failed numerical self-checks.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// A right-hand side produced NaN or infinity.
class ModelError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// The Tikhonov-Fenichel projection is not defined at the requested point.
class ReductionError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// The time integrator could not make progress.
class SolverError : public Error {
public:
  using Error::Error;
};

}  // namespace qssmm
