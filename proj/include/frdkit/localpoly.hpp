#pragma once

#include <Eigen/Core>
#include <vector>

#include "frdkit/kernels.hpp"
#include "frdkit/types.hpp"

namespace frd {

// Bandwidth-window subsample split at the cutoff. The split is half-open at
// the cutoff only: x == x0 joins the plus side, x == x0 - h stays in the
// minus side, x == x0 + h stays in the plus side.
struct EffectiveSample {
  std::vector<Index> idx_plus;   // x in [x0, x0 + h]
  std::vector<Index> idx_minus;  // x in [x0 - h, x0)

  Index n_plus() const { return static_cast<Index>(idx_plus.size()); }
  Index n_minus() const { return static_cast<Index>(idx_minus.size()); }
  Index n_h() const { return n_plus() + n_minus(); }
};

EffectiveSample split_effective(const Sample& sample, double x0, double h);

// [1, (x - x0), ..., (x - x0)^p]
Eigen::VectorXd design_vector(double x, double x0, int p);

// One-sided fit pieces: effective weights, the moment matrix S, and its
// conditioning diagnostic.
struct SideFit {
  Eigen::VectorXd weights;         // omega_i, aligned with the side indices
  Eigen::VectorXd kernel_weights;  // K_h(x_i - x0), same alignment
  Eigen::MatrixXd moment_matrix;   // S, (p+1) x (p+1)
  double min_eigenvalue = 0.0;

  // Boundary estimate sum(v_i K_i w_i) / sum(K_i w_i) for side values v.
  double intercept(const Eigen::VectorXd& side_values) const;
};

// S = sum_i K_h(x_i - x0) H_i H_i' over one side. Throws
// IllConditionedDesign when the scale-free minimum-eigenvalue check fails
// and InsufficientSample when fewer than p+1 observations carry positive
// kernel weight.
Eigen::MatrixXd moment_matrix(const Sample& sample,
                              const std::vector<Index>& side, double x0,
                              double h, int p, KernelKind kernel);

SideFit side_weights(const Sample& sample, const std::vector<Index>& side,
                     double x0, double h, int p, KernelKind kernel);

// Boundary value of the conditional mean of `values` (full-length vector,
// subset internally) estimated from one side.
double boundary_estimate(const Sample& sample, const std::vector<Index>& side,
                         const Eigen::VectorXd& values, double x0, double h,
                         int p, KernelKind kernel);

// The standard four-regression estimator: outcome jump over treatment jump.
struct StandardFit {
  double tau_hat = 0.0;
  double tau_y = 0.0;  // mu_plus - mu_minus
  double tau_d = 0.0;  // pi_plus - pi_minus
  double mu_plus = 0.0, mu_minus = 0.0;
  double pi_plus = 0.0, pi_minus = 0.0;
  Index n_plus = 0, n_minus = 0;
  bool denominator_flagged = false;  // |tau_d| < flag_eps
};

// Near-zero denominators below `flag_eps` are flagged in the result; only
// |tau_d| < hard_eps raises DegenerateDenominator. Extreme ratios above the
// hard floor are returned as-is so heavy tails stay observable.
StandardFit frd_standard(const Sample& sample, double x0, double h, int p,
                         KernelKind kernel, double flag_eps = 1e-8,
                         double hard_eps = 1e-13);

}  // namespace frd
