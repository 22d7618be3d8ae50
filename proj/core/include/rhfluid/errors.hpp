#pragma once

#include <stdexcept>
#include <string>

namespace rhfluid {

// Bad argument values (alpha >= 1, probe index 0, malformed config).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller broke an operation's precondition (duplicate key, empty table).
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class TableFull : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

class EmptyTable : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical fixed point or integration failed to settle.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rhfluid
