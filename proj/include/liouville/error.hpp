#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, option or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain of an operation (nonpositive v for log, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Tabulated profile queried outside its table.
class ExtrapolationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// NaN, overflow, or a singular linear system during a solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace liouville
