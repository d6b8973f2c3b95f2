#pragma once

#include <stdexcept>
#include <string>

namespace tvae {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV, checkpoint, config).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Arguments or configuration that violate a documented precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A computation would exceed a configured size cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf encountered in a numeric routine.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tvae
