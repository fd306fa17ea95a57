#include "frdkit/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "frdkit/errors.hpp"

namespace frd {

BandwidthRule BandwidthRule::fixed(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorCode::InvalidBandwidth,
         "fixed bandwidth must be finite and positive");
  }
  return BandwidthRule{Kind::Fixed, h, {}};
}

BandwidthRule BandwidthRule::rule_of_thumb() {
  return BandwidthRule{Kind::RuleOfThumb, 0.0, {}};
}

BandwidthRule BandwidthRule::external(std::string name) {
  return BandwidthRule{Kind::External, 0.0, std::move(name)};
}

namespace {

// Linear-interpolation sample quantile on sorted data.
double sorted_quantile(const std::vector<double>& sorted, double prob) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = prob * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

// Smallest h such that each side of the cutoff holds at least `need`
// observations; the minus side is [x0-h, x0), so points at x == x0 can never
// satisfy it.
double floor_bandwidth(const Sample& sample, double x0, Index need) {
  std::vector<double> above, below;
  for (Index i = 0; i < sample.n(); ++i) {
    const double dx = sample.x[i] - x0;
    if (dx >= 0.0) {
      above.push_back(dx);
    } else {
      below.push_back(-dx);
    }
  }
  if (static_cast<Index>(above.size()) < need ||
      static_cast<Index>(below.size()) < need) {
    fail(ErrorCode::InsufficientSample,
         "not enough observations on both sides of the cutoff for the "
         "bandwidth floor");
  }
  const std::size_t k = static_cast<std::size_t>(need) - 1;
  std::nth_element(above.begin(), above.begin() + static_cast<std::ptrdiff_t>(k),
                   above.end());
  std::nth_element(below.begin(), below.begin() + static_cast<std::ptrdiff_t>(k),
                   below.end());
  const double h = std::max(above[k], below[k]);
  // Nudge past the boundary so kernels that vanish at |u| = 1 keep the
  // flooring observations active.
  return h * (1.0 + 1e-9) + 1e-300;
}

}  // namespace

double select_bandwidth(const BandwidthRule& rule, const Sample& sample,
                        double x0, int p, KernelKind /*kernel*/) {
  switch (rule.kind) {
    case BandwidthRule::Kind::Fixed:
      if (!(rule.value > 0.0) || !std::isfinite(rule.value)) {
        fail(ErrorCode::InvalidBandwidth,
             "fixed bandwidth must be finite and positive");
      }
      return rule.value;
    case BandwidthRule::Kind::External:
      fail(ErrorCode::InvalidInput,
           "external bandwidth '" + rule.name +
               "' has no value; supply it via configuration");
    case BandwidthRule::Kind::RuleOfThumb:
      break;
  }

  const Index n = sample.n();
  if (n < 2) {
    fail(ErrorCode::InsufficientSample, "rule of thumb needs n >= 2");
  }
  const double mean = sample.x.mean();
  const double var =
      (sample.x.array() - mean).square().sum() / static_cast<double>(n - 1);
  std::vector<double> sorted(sample.x.data(), sample.x.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double sigma = std::min(std::sqrt(var), iqr / 1.349);

  const Index need = 2 * static_cast<Index>(p + 1);
  const double h_floor = floor_bandwidth(sample, x0, need);
  const double h_rot =
      1.84 * sigma * std::pow(static_cast<double>(n), -0.2);
  return std::max(h_rot, h_floor);
}

}  // namespace frd
