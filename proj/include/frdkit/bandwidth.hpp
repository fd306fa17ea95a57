#pragma once

#include <string>

#include "frdkit/kernels.hpp"
#include "frdkit/types.hpp"

namespace frd {

// Bandwidth provision: fixed values, a transparent rule of thumb, or a named
// external hook whose value must be supplied through configuration.
struct BandwidthRule {
  enum class Kind { Fixed, RuleOfThumb, External };
  Kind kind = Kind::RuleOfThumb;
  double value = 0.0;  // Fixed
  std::string name;    // External

  static BandwidthRule fixed(double h);
  static BandwidthRule rule_of_thumb();
  static BandwidthRule external(std::string name);
};

// RuleOfThumb: h = 1.84 * sigma_x * n^(-1/5) with
// sigma_x = min(sd(x), IQR(x)/1.349), then floored so each side of the
// cutoff holds at least 2(p+1) observations. External rules must be
// resolved to Fixed before calling.
double select_bandwidth(const BandwidthRule& rule, const Sample& sample,
                        double x0, int p, KernelKind kernel);

}  // namespace frd
