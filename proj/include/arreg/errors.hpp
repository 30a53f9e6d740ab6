#pragma once

#include <stdexcept>
#include <string>

namespace arreg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad moduli, out-of-range ranks, unparsable files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two operands belong to different groups.
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

/// A configured search or enumeration cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An operation's stated precondition does not hold for the given input.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace arreg
