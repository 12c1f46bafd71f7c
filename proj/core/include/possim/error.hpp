#pragma once

#include <stdexcept>
#include <string>

namespace possim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query set or evaluation point lies outside the space a contour is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (alpha outside [0,1], empty sample, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The requested combination of inputs cannot be built (missing sampler, flat density, unknown model).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine produced a non-finite or inconsistent result.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Observed or sampled data violate the operation's range contract.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Observed data are degenerate for the model (e.g. zero sample variance).
class DegenerateDataError : public DataError {
 public:
  using DataError::DataError;
};

/// The operation exists but is not available for this input shape.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace possim
