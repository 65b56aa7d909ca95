#pragma once

#include <stdexcept>
#include <string>

namespace relab {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live in spaces of incompatible dimension.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold for its input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotSectorial : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotMaximalSectorial : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// mul R is not orthogonal to dom R, so (phi', psi) depends on the choice of phi'.
class IllDefinedForm : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Neither kernel condition (ker S = ker S*) nor multivalued-part condition
// (mul S = mul S*) holds, whichever the requested mode needs.
class NotFactorizable : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// The standing hypothesis E = D of the extremal description is not met.
class AssumptionNotMet : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A construction requested for a side (left/right) it does not support.
class UnsupportedSide : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Malformed instance file or command: parse errors, unknown names, bad shapes.
class InputError : public Error {
 public:
  using Error::Error;
};

// An identity that holds as a theorem failed numerically. This points at a
// tolerance or rank decision, never at user input.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace relab
