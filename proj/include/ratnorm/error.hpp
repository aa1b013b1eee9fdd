#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ratnorm {

enum class ErrorCode {
  NonPositiveSigma,
  CorrelationOutOfRange,
  SingularCorrelation,
  DegenerateConditioning,
  InvalidSingularParams,
  Overflow,
  XBelowThreshold,
  ThresholdNotAboveOne,
  UndefinedRatio,
  RegimeNotApplicable,
  InsufficientSamples,
  InsufficientTail,
  KindMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every module of the library. The code is stable
/// and is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ratnorm
