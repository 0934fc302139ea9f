#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace monosplit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Block counts or block lengths do not match a space signature.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range (step size, exponent, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An iterate became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : Error("divergence at iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// An objective or conjugate evaluator is not available for a catalog entry.
class UnsupportedEvaluation : public Error {
 public:
  using Error::Error;
};

}  // namespace monosplit
