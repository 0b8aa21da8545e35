#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcurves {

enum class ErrorCode {
  InvalidArgument,
  MaxDepthExceeded,
  NonFiniteIntegrand,
  DomainExceeded,
  UnknownName,
  DegenerateLcg,
  TurningUnreachable,
  NoSolution,
  DegenerateInput,
  EmptyRegion,
  AntipodalSingularity,
  EmptyInput,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::DomainExceeded: return "DomainExceeded";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::DegenerateLcg: return "DegenerateLcg";
    case ErrorCode::TurningUnreachable: return "TurningUnreachable";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::AntipodalSingularity: return "AntipodalSingularity";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code, so
/// callers (the CLI in particular) can map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcurves
