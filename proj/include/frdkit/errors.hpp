#pragma once

#include <stdexcept>
#include <string>

namespace frd {

// Stable machine-readable failure categories. The CLI maps these to exit
// codes, so the set and spelling must not change casually.
enum class ErrorCode {
  InvalidInput,
  InvalidBandwidth,
  InsufficientSample,
  IllConditionedDesign,
  DegenerateDenominator,
  NoIdentification,
  CollinearCovariates,
  DegenerateVariance,
  EmptySummary,
  BadData,
  Io,
};

const char* error_code_name(ErrorCode code);
int error_code_exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace frd
