#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace expheat {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A value exceeded the cap under which e^{u^2} is evaluated safely.
class OverflowGuardError : public Error {
 public:
  OverflowGuardError(const std::string& what, double value)
      : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Bisection could not bracket its target.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The time stepper or a linear solve produced an unusable state.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration; carries the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace expheat
