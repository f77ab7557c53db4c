#pragma once

#include <stdexcept>
#include <string>

namespace qmpkit {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  PointOutsideDomain,
  StencilClipsBoundary,
  NonPositiveDefinite,
  LeftDomain,
  StepTooLarge,
  ShootingDiverged,
  ConjugatePointSuspected,
  FitIllConditioned,
  NotInvertible,
  NegativeDeterminant,
  NotNormalized,
  GuardViolation,
  AsymmetryExceeded,
  SolverFailure,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qmpkit
