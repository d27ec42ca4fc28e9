#pragma once

#include <stdexcept>
#include <string>

namespace spin_atlas {

/// Input that violates a documented precondition or invariant.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed serialized data (JSON spec files, CSV traces, configs).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trace rows with a column count different from the header.
class LengthMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Trace field column that is not strictly increasing.
class NonMonotonicField : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Numerical procedure failed (LAPACK error, singular fit system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lookup of an unknown catalog id or similar.
class NotFound : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace spin_atlas
