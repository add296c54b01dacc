#pragma once

#include <stdexcept>
#include <string>

namespace netreal {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, out-of-range index, bad file.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition (strict properness, compatibility) is violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue iteration or another numerical kernel failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// zI - A is numerically singular at the requested evaluation point.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Direct term is non-square, singular or too ill-conditioned to invert.
class InversionError : public Error {
 public:
  using Error::Error;
};

}  // namespace netreal
