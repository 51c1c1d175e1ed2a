#pragma once

#include <stdexcept>
#include <string>

namespace spamri {

// Base for every error raised by the library. The C API maps each subclass
// onto a status code; the CLI maps status codes onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration value or argument outside its documented domain.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operands whose grid shapes or coil counts disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// File missing, unreadable, or malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or a diverged iteration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace spamri
