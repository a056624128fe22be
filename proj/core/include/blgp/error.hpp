#pragma once

#include <stdexcept>
#include <string>

namespace blgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, malformed files, contract violations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Observation times are not on the grid required by a closed-form shortcut.
class GridMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation produced a non-finite or otherwise unusable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorisation failed even after the jitter retries.
class IllConditionedError : public NumericalError {
 public:
  IllConditionedError(const std::string& what, double min_eigenvalue)
      : NumericalError(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace blgp
