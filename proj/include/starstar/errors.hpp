#pragma once

#include <stdexcept>
#include <string>

namespace starstar {

// Base class for every failure raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A denominator factor of an infinite product vanished: the requested point
// sits on (or numerically indistinguishably close to) a pole lattice.
class PoleError : public Error {
 public:
  using Error::Error;
};

// A series representation was requested outside its strip of validity.
class StripError : public Error {
 public:
  using Error::Error;
};

// A square root whose branch is only fixed in the real-nome regime was
// requested for a value that is not (numerically) real and non-negative.
class BranchError : public Error {
 public:
  using Error::Error;
};

// Rapidities or derived parameters fall outside the verification regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Grid refinement reached its cap before meeting the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed run/quadrature specs, dimension mismatches, size caps.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A non-finite value appeared where the algorithm guarantees finite ones.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace starstar
