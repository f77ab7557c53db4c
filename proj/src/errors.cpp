#include "qmpkit/errors.hpp"

namespace qmpkit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::StencilClipsBoundary: return "StencilClipsBoundary";
    case ErrorCode::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ShootingDiverged: return "ShootingDiverged";
    case ErrorCode::ConjugatePointSuspected: return "ConjugatePointSuspected";
    case ErrorCode::FitIllConditioned: return "FitIllConditioned";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NegativeDeterminant: return "NegativeDeterminant";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::GuardViolation: return "GuardViolation";
    case ErrorCode::AsymmetryExceeded: return "AsymmetryExceeded";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace qmpkit
