#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ballbody {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  EmptyBody,
  Infeasible,
  NoConvergence,
  Degenerate,
  InsufficientResolution,
  CurveHitsOrigin,
  ResolutionExhausted,
  NotAnIsometry,
  Ambiguous,
  EmptyRaster,
  GridMismatch,
  Parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::EmptyBody: return "empty body";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::InsufficientResolution: return "insufficient resolution";
    case ErrorKind::CurveHitsOrigin: return "curve hits origin";
    case ErrorKind::ResolutionExhausted: return "resolution exhausted";
    case ErrorKind::NotAnIsometry: return "not an S_n-isometry";
    case ErrorKind::Ambiguous: return "ambiguous";
    case ErrorKind::EmptyRaster: return "empty raster";
    case ErrorKind::GridMismatch: return "grid mismatch";
    case ErrorKind::Parse: return "parse error";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit status for a failure: 2 parse, 3 invariant, 4 the map is not
/// an isometry of ball bodies, 5 resolution exhausted.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return 2;
    case ErrorKind::NotAnIsometry:
    case ErrorKind::Ambiguous: return 4;
    case ErrorKind::ResolutionExhausted:
    case ErrorKind::InsufficientResolution: return 5;
    default: return 3;
  }
}

}  // namespace ballbody
