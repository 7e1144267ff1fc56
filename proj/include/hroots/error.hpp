#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hroots {

enum class ErrorCode {
  EmptyInput,
  LeadingCoefficientZero,
  DegreeZero,
  ConstantTermZero,
  InsufficientStream,
  PrecisionExhausted,
  TooFewPoints,
  GapInProducts,
  IllConditionedSystem,
  NonIntegerMultiplicity,
  ShiftBudgetExhausted,
  ResidualCheckFailed,
  RGreaterThanP,
  NoModulusGap,
  NoConvergence,
  ParseError,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Numerical failures (as opposed to bad input) map to CLI exit status 2.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string stage, const std::string& message,
        std::optional<long> index = std::nullopt);

  [[nodiscard]] ErrorCode code() const { return code_; }
  /// Pipeline stage that raised the error, e.g. "series.taylor_coeffs".
  [[nodiscard]] const std::string& stage() const { return stage_; }
  /// Series index k where the failure occurred, when meaningful.
  [[nodiscard]] std::optional<long> index() const { return index_; }

 private:
  ErrorCode code_;
  std::string stage_;
  std::optional<long> index_;
};

}  // namespace hroots
