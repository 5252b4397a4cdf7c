#ifndef MVMIMIC_ERROR_HPP
#define MVMIMIC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvmimic {

enum class ErrorCode {
  DimensionMismatch,
  NotSymmetric,
  NotPositiveDefinite,
  TooFewAssets,
  TooFewInvestors,
  NonPositiveAlpha,
  NonPositiveBeta,
  BetaNotNormalized,
  NegativePhi,
  NonFiniteValue,
  ConstraintViolated,
  NotUniformWealth,
  NumericalBreakdown,
  SingularKkt,
  SizeCapExceeded,
  IoError,
  ParseError,
  TooFewObservations,
  NonPositiveOptimum,
  InvalidConfig,
};

/// Coarse grouping used by the command-line tool to pick an exit status.
enum class ErrorCategory { Validation, Io, Numerical };

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::TooFewAssets: return "TooFewAssets";
    case ErrorCode::TooFewInvestors: return "TooFewInvestors";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::BetaNotNormalized: return "BetaNotNormalized";
    case ErrorCode::NegativePhi: return "NegativePhi";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::NotUniformWealth: return "NotUniformWealth";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::SingularKkt: return "SingularKkt";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::NonPositiveOptimum: return "NonPositiveOptimum";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

constexpr ErrorCategory category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError:
      return ErrorCategory::Io;
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::SingularKkt:
    case ErrorCode::NonPositiveOptimum:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Validation;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the leading error-code name.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mvmimic

#endif  // MVMIMIC_ERROR_HPP
