#pragma once

#include <stdexcept>
#include <string>

namespace varprod {

/// Root of the library's exception hierarchy. The three direct subclasses map
/// onto the CLI exit codes (2 validation, 3 numeric, 4 I/O).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class NumericError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

// Argument outside a function's mathematical domain.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Input sequence too short or mismatched in length.
class LengthError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  /// line 0 means the location is unknown.
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InstabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Transition matrix with a negative discriminant; outside the modelled class.
class ComplexEigenvalueError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A moment required by the computation is infinite for the residual law.
class HeavyTailError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularMomentError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace varprod
