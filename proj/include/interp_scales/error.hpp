#pragma once

#include <stdexcept>
#include <string>

namespace interp_scales {

/// Base of every error raised by the library. Callers that only care about
/// "something went wrong" catch this; tests and the CLI dispatch on the
/// concrete subclasses below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or structurally malformed data (NaN entries, increasing "decreasing" sequences).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter outside its admissible range (p <= 0, a outside [0,1], ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Function evaluated outside (0, inf).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A finite weight sequence was asked for an index past its end and has no generator.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The requested combination is valid mathematically but outside what the solver handles.
class UnsupportedParameters : public Error {
 public:
  using Error::Error;
};

/// Interpolation integral tails could not be brought under tolerance.
class DivergentTail : public Error {
 public:
  using Error::Error;
};

}  // namespace interp_scales
