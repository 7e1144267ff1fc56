#include "hroots/error.hpp"

namespace hroots {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LeadingCoefficientZero: return "LeadingCoefficientZero";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::ConstantTermZero: return "ConstantTermZero";
    case ErrorCode::InsufficientStream: return "InsufficientStream";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::GapInProducts: return "GapInProducts";
    case ErrorCode::IllConditionedSystem: return "IllConditionedSystem";
    case ErrorCode::NonIntegerMultiplicity: return "NonIntegerMultiplicity";
    case ErrorCode::ShiftBudgetExhausted: return "ShiftBudgetExhausted";
    case ErrorCode::ResidualCheckFailed: return "ResidualCheckFailed";
    case ErrorCode::RGreaterThanP: return "RGreaterThanP";
    case ErrorCode::NoModulusGap: return "NoModulusGap";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::LeadingCoefficientZero:
    case ErrorCode::DegreeZero:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidConfig:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorCode code, std::string stage, const std::string& message,
             std::optional<long> index)
    : std::runtime_error(std::string(to_string(code)) + " in " + stage + ": " + message),
      code_(code),
      stage_(std::move(stage)),
      index_(index) {}

}  // namespace hroots
