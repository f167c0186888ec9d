#pragma once

#include <stdexcept>
#include <string>

namespace cauchy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition does not hold (matrix not PSD, rank-deficient
/// A, no minimizer, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine failed to reach its tolerance, or produced a
/// non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The line search collapsed its bracket to adjacent doubles without meeting
/// its tolerance: gradient rounding noise dominates φ'.
class PrecisionLimit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed scenario file or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cauchy
