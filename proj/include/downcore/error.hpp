#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace downcore {

enum class ErrorCode {
  // core-space
  EmptySpace,
  DuplicatePointId,
  NonPositiveWeight,
  UnknownPointId,
  IndexOutOfRange,
  EmptyFirstMissing,
  DuplicateChainSet,
  NotNested,
  NotFull,
  // halfline
  NotSorted,
  NegativeEntry,
  LengthMismatch,
  NotIncreasingMass,
  NegativeValue,
  NonFiniteValue,
  // constructions / norms / kfunc
  NegativeGamma,
  NegativeFunction,
  BadExponent,
  NegativeT,
  EmptyGrid,
  CurveNotMonotone,
  CurveNotConcave,
  // oracle
  TooManyAtoms,
  TooManyPoints,
  GNotDecreasing,
  DeadlineExceeded,
  // instance files
  MalformedInstance,
  UnknownFunction,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::DuplicatePointId: return "DuplicatePointId";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::UnknownPointId: return "UnknownPointId";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyFirstMissing: return "EmptyFirstMissing";
    case ErrorCode::DuplicateChainSet: return "DuplicateChainSet";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::NotFull: return "NotFull";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotIncreasingMass: return "NotIncreasingMass";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeGamma: return "NegativeGamma";
    case ErrorCode::NegativeFunction: return "NegativeFunction";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::NegativeT: return "NegativeT";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::CurveNotMonotone: return "CurveNotMonotone";
    case ErrorCode::CurveNotConcave: return "CurveNotConcave";
    case ErrorCode::TooManyAtoms: return "TooManyAtoms";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::GNotDecreasing: return "GNotDecreasing";
    case ErrorCode::DeadlineExceeded: return "DeadlineExceeded";
    case ErrorCode::MalformedInstance: return "MalformedInstance";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message starts with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}
  explicit Error(ErrorCode code) : Error(code, "") {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace downcore
