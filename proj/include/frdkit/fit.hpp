#pragma once

#include <string>

#include "frdkit/bandwidth.hpp"
#include "frdkit/estimators.hpp"
#include "frdkit/inference.hpp"

namespace frd {

// One named estimator: the standard FRD ratio is lambda = 1 with a
// triangular kernel; the lambda-class defaults pair Fuller-style rules with
// the uniform kernel.
struct EstimatorConfig {
  std::string name = "lambda4";
  int p = 1;
  KernelKind kernel = KernelKind::Uniform;
  LambdaRule lambda = LambdaRule::fuller(4.0);

  // "standard", "lambda4", "lambda1", "ols"
  static EstimatorConfig from_name(const std::string& name);
};

struct FitConfig {
  double x0 = 0.0;
  EstimatorConfig estimator;
  BandwidthRule bandwidth = BandwidthRule::rule_of_thumb();
  VarianceSpec variance;
  double ci_level = 0.95;
  CritLaw crit_law = CritLaw::StudentT;
  double degenerate_flag_eps = 1e-8;
  bool use_covariates = true;  // partial out sample.w when present
};

struct FitResult {
  EstimateResult est;
  double variance = 0.0;  // scaled sandwich V; V / n_h estimates Var(tau)
  ConfidenceInterval ci;
  double h_used = 0.0;
  Index n_h = 0;
};

// Full pipeline: bandwidth, effective-sample split, weighted transform
// (covariates partialled out when present), lambda-class point estimate,
// sandwich variance, confidence interval.
FitResult fit(const Sample& sample, const FitConfig& config);

// Same pipeline with the bandwidth already resolved.
FitResult fit_with_bandwidth(const Sample& sample, const FitConfig& config,
                             double h);

}  // namespace frd
