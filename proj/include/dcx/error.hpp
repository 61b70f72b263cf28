#pragma once

#include <stdexcept>
#include <string>

namespace dcx {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or rings do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the mathematical input failed (not a chain map, not
/// reduced, not a cofibration, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Kernel over Z/m is not a free module, so it has no basis.
class NonFreeKernel : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dcx
