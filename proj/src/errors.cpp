#include "frdkit/errors.hpp"

namespace frd {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
      return "invalid-input";
    case ErrorCode::InvalidBandwidth:
      return "invalid-bandwidth";
    case ErrorCode::InsufficientSample:
      return "insufficient-sample";
    case ErrorCode::IllConditionedDesign:
      return "ill-conditioned-design";
    case ErrorCode::DegenerateDenominator:
      return "degenerate-denominator";
    case ErrorCode::NoIdentification:
      return "no-identification";
    case ErrorCode::CollinearCovariates:
      return "collinear-covariates";
    case ErrorCode::DegenerateVariance:
      return "degenerate-variance";
    case ErrorCode::EmptySummary:
      return "empty-summary";
    case ErrorCode::BadData:
      return "bad-data";
    case ErrorCode::Io:
      return "io-error";
  }
  return "unknown";
}

int error_code_exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
      return 2;
    case ErrorCode::InvalidBandwidth:
      return 3;
    case ErrorCode::InsufficientSample:
      return 4;
    case ErrorCode::IllConditionedDesign:
      return 5;
    case ErrorCode::DegenerateDenominator:
      return 6;
    case ErrorCode::NoIdentification:
      return 7;
    case ErrorCode::CollinearCovariates:
      return 8;
    case ErrorCode::DegenerateVariance:
      return 9;
    case ErrorCode::EmptySummary:
      return 10;
    case ErrorCode::BadData:
      return 11;
    case ErrorCode::Io:
      return 12;
  }
  return 1;
}

}  // namespace frd
