#pragma once

#include <stdexcept>
#include <string>

namespace siedm {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index or position outside the valid range of a structure.
class RangeError : public Error {
 public:
  using Error::Error;
};

// select() asked for an occurrence that does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Input violates a structural precondition (non-monotone sequence,
// adjacent equal symbols in a repetition-free segment, malformed grammar).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Text rejected for indexing (too short, too long).
class InputError : public Error {
 public:
  using Error::Error;
};

// Query rejected (|Q| < 2, |Q| > |S|).
class QueryError : public Error {
 public:
  using Error::Error;
};

// Serialized index is truncated, corrupted or of an unknown version.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace siedm
