#pragma once

#include <stdexcept>
#include <string>

namespace sgep {

enum class ErrorCode {
  ZeroVector,
  DimensionMismatch,
  InvalidSparsity,
  InvalidMatrix,
  InvalidInput,
  InvalidConfig,
  BadInitialPoint,
  NotIdentityB,
  InvalidStep,
  DegenerateIterate,
  IndexOutOfRange,
  IntoSupportNotZero,
  InvalidR,
  NotPositiveDefinite,
  BudgetExceeded,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidSparsity: return "InvalidSparsity";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::BadInitialPoint: return "BadInitialPoint";
    case ErrorCode::NotIdentityB: return "NotIdentityB";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::DegenerateIterate: return "DegenerateIterate";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::IntoSupportNotZero: return "IntoSupportNotZero";
    case ErrorCode::InvalidR: return "InvalidR";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sgep
