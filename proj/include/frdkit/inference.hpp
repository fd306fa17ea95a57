#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "frdkit/estimators.hpp"

namespace frd {

enum class VarianceFlavor { Homoskedastic, HC0, HC1 };

// Cluster ids, when present, must align with the weighted-data rows; the
// meat then sums score outer products within clusters.
struct VarianceSpec {
  VarianceFlavor flavor = VarianceFlavor::HC1;
  std::vector<std::int64_t> cluster_ids;  // empty = independent errors

  bool clustered() const { return !cluster_ids.empty(); }
};

enum class CritLaw { Normal, StudentT };

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  CritLaw crit_law = CritLaw::StudentT;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double length() const { return hi - lo; }
};

// u_t = y_t - v_t delta_hat - d_t tau_hat, with delta_hat the least-squares
// fit of (y_t - d_t tau_hat) on the weighted regressors.
Eigen::VectorXd lambda_residuals(const WeightedData& wd, double tau_hat);

// Sandwich variance for the lambda-class estimate, scaled for the
// sqrt(n_h)-normalised t statistic: V / n_h estimates Var(tau_hat). The
// numerator exploits the one-dimensional instrument projection, so no
// n_h x n_h matrix is ever formed.
double variance_lambda(const WeightedData& wd, const EstimateResult& est,
                       const VarianceSpec& spec);

// sqrt(n_h) (tau_hat - tau_null) / sqrt(V)
double t_stat(double tau_hat, double tau_null, double v_hat, Index n_h);

// tau_hat +/- c * sqrt(V / n_h); critical value from N(0,1) or t(n_h).
ConfidenceInterval confidence_interval(double tau_hat, double v_hat,
                                       Index n_h, double level, CritLaw law);

double critical_value(CritLaw law, double level, Index n_h);

}  // namespace frd
