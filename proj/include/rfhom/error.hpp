#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rfhom {

enum class ErrorCode {
  InvalidArgument,
  InfeasibleBounds,
  DegenerateGrid,
  DelayOutOfRange,
  UndefinedSNR,
  GridMismatch,
  DegenerateState,
  DegenerateDenominator,
  ConfigMismatch,
  ParseError,
  SolverFailure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InfeasibleBounds: return "InfeasibleBounds";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::DelayOutOfRange: return "DelayOutOfRange";
    case ErrorCode::UndefinedSNR: return "UndefinedSNR";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can print a machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace rfhom
