#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "frdkit/fit.hpp"
#include "frdkit/rng.hpp"

namespace frd {

enum class RegressionDesign { Lee, Ludwig };
enum class AssignmentRule { Pi1, Pi2, Pi3 };
enum class RunningLaw { StdNormal, UniformSym, ScaledBeta };

RegressionDesign design_from_name(const std::string& name);
AssignmentRule pi_rule_from_name(const std::string& name);
RunningLaw x_law_from_name(const std::string& name);
const char* design_name(RegressionDesign d);
const char* pi_rule_name(AssignmentRule r);
const char* x_law_name(RunningLaw l);

// Treatment effects the calibrated designs were built around.
double default_tau(RegressionDesign design);

struct DgpSpec {
  RegressionDesign m_kind = RegressionDesign::Lee;
  AssignmentRule pi_kind = AssignmentRule::Pi1;
  double pi_plus = 0.8;  // in (0.5, 1]; the jump pi0 equals 2*pi_plus - 1
  RunningLaw x_law = RunningLaw::StdNormal;
  double sigma_u2 = 0.09;
  double tau_true = 0.04;
  Index n = 300;
  double x0 = 0.0;

  double pi_minus() const { return 1.0 - pi_plus; }
  double pi_jump() const { return 2.0 * pi_plus - 1.0; }
  void validate() const;
};

// Piecewise quintic regression functions calibrated to the two reference
// designs, split at zero with a continuous intercept.
double m_eval(RegressionDesign kind, double x);

// Assignment probabilities. The second rule's printed form covers
// [-1, inf); below -1 it continues as clamp(pi_minus * (x + 1), 0, 1).
double pi_eval(AssignmentRule kind, double x, double pi_plus);

// y = m(x) + tau d + u, d ~ Bernoulli(pi(x)), u ~ N(0, sigma_u2).
Sample draw_sample(const DgpSpec& spec, CounterRng& rng);
Sample draw_sample(const DgpSpec& spec, std::uint64_t seed);

// Location/spread/coverage metrics over a vector of estimates. Order
// statistics are computed on a sorted copy, so input order is irrelevant.
struct Metrics {
  double median_bias = 0.0;
  double mad = 0.0;            // median |tau_i - median(tau)|
  double mad_about_true = 0.0; // median |tau_i - tau|
  double rmse = 0.0;
  double mean_bias = 0.0;
  double coverage_pct = -1.0;  // negative when no intervals supplied
  double mean_length = -1.0;
};

Metrics compute_metrics(const std::vector<double>& estimates, double tau_true,
                        const std::vector<ConfidenceInterval>* intervals);

// Linear-interpolation quantile of an ascending-sorted vector.
double sample_quantile(const std::vector<double>& sorted_values, double prob);

struct McConfig {
  DgpSpec dgp;
  std::vector<EstimatorConfig> estimators;
  BandwidthRule bandwidth = BandwidthRule::rule_of_thumb();
  VarianceFlavor variance = VarianceFlavor::HC1;
  double ci_level = 0.95;
  CritLaw crit_law = CritLaw::StudentT;
  std::int64_t reps = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  double degenerate_flag_eps = 1e-8;
};

struct McSummary {
  std::string estimator;
  std::int64_t reps_requested = 0;
  std::int64_t reps_completed = 0;
  std::int64_t reps_flagged_degenerate = 0;  // excluded (precondition failed)
  std::int64_t reps_near_degenerate = 0;     // completed with flagged jump
  Metrics metrics;
  std::uint64_t seed = 0;
};

// Replication engine. Each repetition draws its own counter-based stream
// keyed by (seed, rep), one common bandwidth is shared by all estimators
// within a repetition, and summaries do not depend on the thread count.
std::vector<McSummary> run_mc(const McConfig& config);

// Raw sampling distributions plus the reference-density calibrations:
// normal variance from the empirical variance of the calibration estimator
// and Cauchy scale from its IQR.
struct SamplingDistribution {
  std::vector<std::string> estimators;
  std::vector<std::vector<double>> estimates;  // completed reps, rep order
  std::vector<std::int64_t> excluded;
  std::string calibration_estimator;
  double normal_variance = 0.0;
  double cauchy_scale = 0.0;
  std::vector<double> quantile_probs;
  std::vector<std::vector<double>> abs_quantiles;  // quantiles of |tau|
};

SamplingDistribution sampling_distribution(
    const McConfig& config,
    std::vector<double> quantile_probs = {0.5, 0.75, 0.9, 0.99, 0.999});

namespace detail {
// Runs body(rep) for rep in [0, reps) over `threads` workers. Exceptions in
// the body escape after all workers join.
void parallel_reps(std::int64_t reps, int threads,
                   const std::function<void(std::int64_t)>& body);
}  // namespace detail

}  // namespace frd
