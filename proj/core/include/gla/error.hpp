#pragma once

#include <stdexcept>
#include <string>

namespace gla {

// Base for every error raised by the library. Derived types let the CLI map
// failures onto its exit-code contract without string matching.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Numerical precondition failed (non-Hurwitz matrix, defective eigenbasis,
// uncontrollable pair, ...).
class NumericalError : public Error {
  public:
    using Error::Error;
};

// Caller supplied inconsistent dimensions or out-of-range parameters.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

// File content failed schema or integrity validation.
class FormatError : public Error {
  public:
    using Error::Error;
};

// Simulation state left the configured bound or became non-finite.
class DivergenceError : public Error {
  public:
    using Error::Error;
};

}  // namespace gla
