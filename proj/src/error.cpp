#include "ulampc/error.hpp"

namespace ulampc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ExprDomain: return "ExprDomain";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::BelowResolutionFloor: return "BelowResolutionFloor";
    case ErrorCode::NotInImage: return "NotInImage";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ulampc
