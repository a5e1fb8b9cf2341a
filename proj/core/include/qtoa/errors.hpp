#pragma once

#include <stdexcept>
#include <string>

namespace qtoa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid input: bad config file, bad units, parameters outside their
// documented domain.  The CLI maps these to exit code 1.
struct ConfigError : Error {
  using Error::Error;
};

struct ParseError : ConfigError {
  ParseError(int line, const std::string& what)
      : ConfigError("parse error at line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct ValidationError : ConfigError {
  ValidationError(const std::string& field, const std::string& constraint)
      : ConfigError(field + ": " + constraint), field(field) {}
  std::string field;
};

struct NonUnitary : ValidationError {
  explicit NonUnitary(double max_deviation)
      : ValidationError("mixing_matrix",
                        "not unitary (max |U U^dag - 1| entry = " + std::to_string(max_deviation) + ")"),
        max_deviation(max_deviation) {}
  double max_deviation;
};

struct NonHermitian : ValidationError {
  explicit NonHermitian(const std::string& field)
      : ValidationError(field, "matrix is not Hermitian") {}
};

struct NonPositiveState : ValidationError {
  explicit NonPositiveState(const std::string& what)
      : ValidationError("density_matrix", what) {}
};

struct GridTooCoarse : ConfigError {
  using ConfigError::ConfigError;
};

// Numerical failure: quadrature, fits or step control could not reach the
// requested accuracy.  The CLI maps these to exit code 2.
struct NumericError : Error {
  using Error::Error;
};

struct QuadratureFailure : NumericError {
  using NumericError::NumericError;
};

struct NonConvergent : NumericError {
  using NumericError::NumericError;
};

struct FitFailure : NumericError {
  using NumericError::NumericError;
};

struct GridMismatch : NumericError {
  using NumericError::NumericError;
};

// A closed-form evaluation was requested outside the regime where the formula
// holds.  Fatal in strict mode (CLI exit code 3), a warning flag otherwise.
struct RegimeViolation : Error {
  using Error::Error;
};

}  // namespace qtoa
