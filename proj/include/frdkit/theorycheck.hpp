#pragma once

#include <cstdint>
#include <vector>

#include "frdkit/simlab.hpp"

namespace frd {

// Trinomial counts (Y1, Y2, n - Y1 - Y2) conditioned on Y1 > alpha1 and
// Y2 > alpha2. alpha = -1 disables the truncation of that cell.
struct TruncatedMultinomialSpec {
  std::int64_t n = 0;
  double p1 = 0.0, p2 = 0.0;  // p0 = 1 - p1 - p2
  std::int64_t alpha1 = -1, alpha2 = -1;

  double p0() const { return 1.0 - p1 - p2; }
  void validate() const;
};

// Normalisation kappa = P{Y1 > alpha1, Y2 > alpha2}; lies in (0, 1] and
// equals 1 without truncation.
double truncation_kappa(const TruncatedMultinomialSpec& spec);

// Joint pmf P{Y1 = n1, Y2 = n2 | truncation}. Factorials are evaluated in
// log space so counts up to ~1e4 stay finite.
double truncated_multinomial_pmf(const TruncatedMultinomialSpec& spec,
                                 std::int64_t n1, std::int64_t n2);

// Marginal pmf of cell 1 or 2 under the same conditioning.
double truncated_binomial_marginal(const TruncatedMultinomialSpec& spec,
                                   int cell, std::int64_t m);

// 2m-point sample mirrored about the cutoff with matched treatments:
// x = x0 +/- offsets[i], d duplicated across the mirror. The standard
// denominator is exactly zero on such samples for any kernel and order.
Sample make_symmetric_sample(const std::vector<double>& offsets,
                             const std::vector<int>& d_pattern, double x0);

// Empirical P{|tau_d| < eps} for the standard estimator under a simulated
// design: the positive mass near zero that destroys the ratio's moments.
struct DenominatorProbe {
  std::vector<double> eps;
  std::vector<double> prob;
  std::vector<double> std_error;  // binomial standard errors
  std::int64_t reps_used = 0;
  std::int64_t reps_failed = 0;
};

DenominatorProbe denominator_probe(const DgpSpec& dgp,
                                   const EstimatorConfig& estimator,
                                   const BandwidthRule& bandwidth,
                                   std::int64_t reps, std::uint64_t seed,
                                   std::vector<double> eps_grid,
                                   int threads = 1);

}  // namespace frd
