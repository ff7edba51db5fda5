#pragma once

#include <stdexcept>
#include <string>

namespace gaborzak {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad lattice parameters, ill-posed window, bad config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical target could not be met. Carries the best bound reached.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved_bound)
      : Error(what), achieved_bound_(achieved_bound) {}

  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

}  // namespace gaborzak
