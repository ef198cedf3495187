#pragma once

#include <stdexcept>
#include <string>

namespace ptx {

// Base of every failure raised by the library. The CLI maps ConfigError to
// exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterative solver exceeded its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A linear system or ratio whose denominator vanished.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptx
