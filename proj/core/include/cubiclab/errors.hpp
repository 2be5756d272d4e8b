#pragma once

#include <stdexcept>
#include <string>

namespace cubiclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, solver or symbol configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the range where the operation is defined.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Too much mass sits near the edge of the periodic box: the run no longer
/// emulates the real line.
class DomainTooSmallError : public Error {
 public:
  DomainTooSmallError(const std::string& what, double time, double boundary_fraction)
      : Error(what), time_(time), boundary_fraction_(boundary_fraction) {}
  double time() const noexcept { return time_; }
  double boundary_fraction() const noexcept { return boundary_fraction_; }

 private:
  double time_;
  double boundary_fraction_;
};

/// Non-finite values appeared during time integration.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The solitary-wave iteration found the wrong sign of the nonlinear term.
class NoSolitonError : public Error {
 public:
  using Error::Error;
};

/// Two fields that must share a grid do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace cubiclab
