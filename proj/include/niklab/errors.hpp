#pragma once

#include <stdexcept>
#include <string>

namespace niklab {

/// Error categories used across the library. The CLI maps these to exit codes.
enum class ErrorCode {
  OrderExceeded,
  TooCloseToSupport,
  ZeroArgument,
  UnsupportedWeight,
  InvalidWeight,
  InvalidGeometry,
  OverlappingSupports,
  NonIntegrable,
  NonRealFactor,
  SignViolation,
  BranchInsideSupport,
  WrongArity,
  FVanishes,
  SizeMismatch,
  KindMismatch,
  ShapeMismatch,
  TooManyAtoms,
  CoincidentPoints,
  MixedParity,
  SingularSystem,
  IndexConditionViolated,
  LossOfPositivity,
  TooShort,
  TruncationTooSmall,
  ModulusViolation,
  SchemaError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace niklab
