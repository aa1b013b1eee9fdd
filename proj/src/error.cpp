#include "ratnorm/error.hpp"

namespace ratnorm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::CorrelationOutOfRange: return "CorrelationOutOfRange";
    case ErrorCode::SingularCorrelation: return "SingularCorrelation";
    case ErrorCode::DegenerateConditioning: return "DegenerateConditioning";
    case ErrorCode::InvalidSingularParams: return "InvalidSingularParams";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::XBelowThreshold: return "XBelowThreshold";
    case ErrorCode::ThresholdNotAboveOne: return "ThresholdNotAboveOne";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::RegimeNotApplicable: return "RegimeNotApplicable";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InsufficientTail: return "InsufficientTail";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ratnorm
