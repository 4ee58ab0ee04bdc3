#pragma once

#include <stdexcept>
#include <string>

namespace cdfpen {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data, malformed files or out-of-range configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside a solver (divergence, invalid bracket, ...).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdfpen
