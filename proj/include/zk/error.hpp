#pragma once

#include <stdexcept>
#include <string>

namespace zk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad lengths, counts, parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Array sizes that do not match the grid or basis they are used with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An identity was requested for a run where it does not apply.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during time integration.
class BlowUpError : public Error {
 public:
  BlowUpError(double time, const std::string& what)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace zk
