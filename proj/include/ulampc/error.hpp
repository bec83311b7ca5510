#pragma once

#include <stdexcept>
#include <string>

namespace ulampc {

// Every failure mode the library can report.  The C API maps these 1:1 onto
// ulampc_status values, so the order here is load-bearing: keep it in sync
// with capi.h.
enum class ErrorCode {
  InvalidArgument,
  SyntaxError,
  ExprDomain,
  OutOfDomain,
  BelowResolutionFloor,
  NotInImage,
  NotContracting,
  IndexOutOfRange,
  DimensionMismatch,
  QuadratureFailure,
  NoConvergence,
  SingularSystem,
  NegativeDensity,
  DegenerateOrbit,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace ulampc
