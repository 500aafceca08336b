#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace k3lift {

enum class ErrorCode {
  // malformed or inconsistent input
  InvalidInput,
  ContextMismatch,
  // arithmetic / precondition failures
  NonUnit,
  InsufficientResidueField,
  DegenerateForm,
  PrecisionLoss,
  NotTame,
  NotEigenvector,
  ProjectionCollapse,
  NotApproximateRoot,
  NonSimpleRoot,
  BadPairing,
  NotNearIsotropic,
  NotIsotropic,
  NonUnitPivot,
  ValuationViolation,
  FormNotPerfect,
  InvalidFrame,
  InvalidConnection,
  NoConvergence,
  NotWeaklyTame,
  HodgeLineNotEigen,
  HodgeLineNotInSlope,
  NotAnIsometry,
  SymplecticInput,
  NotSymplectic,
  NoUnitPartner,
  IndependenceFailure,
  HodgeNotOrthogonal,
  RankTooSmall,
};

constexpr std::string_view code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::InsufficientResidueField: return "InsufficientResidueField";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::NotTame: return "NotTame";
    case ErrorCode::NotEigenvector: return "NotEigenvector";
    case ErrorCode::ProjectionCollapse: return "ProjectionCollapse";
    case ErrorCode::NotApproximateRoot: return "NotApproximateRoot";
    case ErrorCode::NonSimpleRoot: return "NonSimpleRoot";
    case ErrorCode::BadPairing: return "BadPairing";
    case ErrorCode::NotNearIsotropic: return "NotNearIsotropic";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::NonUnitPivot: return "NonUnitPivot";
    case ErrorCode::ValuationViolation: return "ValuationViolation";
    case ErrorCode::FormNotPerfect: return "FormNotPerfect";
    case ErrorCode::InvalidFrame: return "InvalidFrame";
    case ErrorCode::InvalidConnection: return "InvalidConnection";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotWeaklyTame: return "NotWeaklyTame";
    case ErrorCode::HodgeLineNotEigen: return "HodgeLineNotEigen";
    case ErrorCode::HodgeLineNotInSlope: return "HodgeLineNotInSlope";
    case ErrorCode::NotAnIsometry: return "NotAnIsometry";
    case ErrorCode::SymplecticInput: return "SymplecticInput";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::NoUnitPartner: return "NoUnitPartner";
    case ErrorCode::IndependenceFailure: return "IndependenceFailure";
    case ErrorCode::HodgeNotOrthogonal: return "HodgeNotOrthogonal";
    case ErrorCode::RankTooSmall: return "RankTooSmall";
  }
  return "Unknown";
}

/// Input errors map to CLI exit code 1, everything else to exit code 2.
constexpr bool is_input_error(ErrorCode c) {
  return c == ErrorCode::InvalidInput || c == ErrorCode::ContextMismatch;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace k3lift
