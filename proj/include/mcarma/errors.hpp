#pragma once

#include <stdexcept>
#include <string>

namespace mcarma {

/// Base class for all library errors.
///
/// Subclasses split into two CLI-visible categories: validation errors
/// (bad inputs, bad files, bad dimensions -> exit code 1) and numerical
/// failures (non-convergence, degeneracy, blow-up -> exit code 2).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidInputError : public Error {
public:
  using Error::Error;
};

class RangeError : public InvalidInputError {
public:
  using InvalidInputError::InvalidInputError;
};

class ParseError : public InvalidInputError {
public:
  using InvalidInputError::InvalidInputError;
};

class UnsupportedError : public InvalidInputError {
public:
  using InvalidInputError::InvalidInputError;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

/// Iterative solver did not reach its tolerance; carries the final residual.
class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& msg, double residual)
      : NumericalError(msg), residual(residual) {}
  double residual;
};

class DegeneracyError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class SimulationBlowupError : public NumericalError {
public:
  SimulationBlowupError(const std::string& msg, double time)
      : NumericalError(msg), time(time) {}
  double time;
};

class NumericIntegrityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace mcarma
