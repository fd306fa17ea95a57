#include "frdkit/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "frdkit/errors.hpp"

namespace frd {

double kernel_eval(KernelKind kind, double u) {
  if (!std::isfinite(u)) {
    fail(ErrorCode::InvalidInput, "kernel argument must be finite");
  }
  const double a = std::abs(u);
  if (a > 1.0) return 0.0;
  switch (kind) {
    case KernelKind::Triangular:
      return 1.0 - a;
    case KernelKind::Uniform:
      return 0.5;
    case KernelKind::Epanechnikov:
      return 0.75 * (1.0 - u * u);
  }
  fail(ErrorCode::InvalidInput, "unknown kernel kind");
}

double kernel_eval_scaled(KernelKind kind, double x, double x0, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorCode::InvalidBandwidth, "bandwidth must be finite and positive");
  }
  return kernel_eval(kind, (x - x0) / h);
}

double kernel_max(KernelKind kind) {
  switch (kind) {
    case KernelKind::Triangular:
      return 1.0;
    case KernelKind::Uniform:
      return 0.5;
    case KernelKind::Epanechnikov:
      return 0.75;
  }
  fail(ErrorCode::InvalidInput, "unknown kernel kind");
}

KernelKind kernel_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "triangular") return KernelKind::Triangular;
  if (lower == "uniform") return KernelKind::Uniform;
  if (lower == "epanechnikov") return KernelKind::Epanechnikov;
  fail(ErrorCode::InvalidInput,
       "unknown kernel '" + std::string(name) +
           "' (expected triangular, uniform, or epanechnikov)");
}

const char* kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Triangular:
      return "triangular";
    case KernelKind::Uniform:
      return "uniform";
    case KernelKind::Epanechnikov:
      return "epanechnikov";
  }
  return "?";
}

}  // namespace frd
