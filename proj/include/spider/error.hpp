#pragma once

#include <stdexcept>
#include <string>

namespace spider {

/// Base of every domain error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file contents (bad row, bad field, unknown layout).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed data that violates an invariant (N < 3, non-finite, bounds).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerically degenerate input: zero variance, zero bandwidth.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// File system failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spider
