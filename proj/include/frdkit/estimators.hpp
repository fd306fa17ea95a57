#pragma once

#include <Eigen/Core>
#include <vector>

#include "frdkit/localpoly.hpp"

namespace frd {

// Kernel-square-root-weighted data over the effective sample. Rows carry
// strictly positive kernel weight (zero-weight boundary rows contribute
// nothing to any quadratic form and are dropped). Column order of v:
// [1, z*(x-x0), (1-z)*(x-x0), ..., z*(x-x0)^p, (1-z)*(x-x0)^p].
struct WeightedData {
  Eigen::VectorXd y;
  Eigen::VectorXd d;
  Eigen::VectorXd z;  // sqrt(K_i) * 1{x_i >= x0}
  Eigen::MatrixXd v;  // rows x (2p+1); rows x 0 after partialling out
  Eigen::MatrixXd w;  // weighted covariate columns, if any
  std::vector<Index> row_index;  // original sample rows
  int p = 0;
  Index n_h = 0;          // effective-sample size (window membership count)
  Index n_plus = 0, n_minus = 0;
  int model_params = 0;   // regressor columns plus one for d
  bool partialled = false;

  Index rows() const { return y.size(); }
};

WeightedData weighted_transform(const Sample& sample,
                                const EffectiveSample& es, double x0, double h,
                                int p, KernelKind kernel);

// Gamma_{p,s} = S_{0,s} - R' U^{-1} R: the Schur complement of the lower
// block of a side moment matrix. Strictly positive for a positive-definite S.
double gamma_side(const Eigen::MatrixXd& side_moment);

// Gamma~ = G+ G- / (G+ + G-), the scalar linking the ratio form to the IV
// form (it equals z'Mz for the weighted design, which tests verify).
double gamma_tilde(const Eigen::MatrixXd& moment_plus,
                   const Eigen::MatrixXd& moment_minus);

// Residuals of each column of `b` after projecting on the weighted
// regressors (identity projection once covariates have been partialled out).
Eigen::MatrixXd residualize(const WeightedData& wd, const Eigen::MatrixXd& b);

// Weighted-IV estimate (z'Mv d)^{-1} z'Mv y; numerically equal to the
// standard four-regression ratio.
double tau_iv(const WeightedData& wd, double hard_eps = 1e-13);

// Fuller-style rule lambda = 1 - psi / (n_h - 2(p+1)).
double lambda_from_psi(double psi, Index n_h, int p);

// How lambda is chosen for a fit. Psi is resolved against the realised
// effective sample size, so validation happens at fit time.
struct LambdaRule {
  enum class Kind { Raw, FullerPsi };
  Kind kind = Kind::FullerPsi;
  double value = 4.0;

  static LambdaRule raw(double lambda);
  static LambdaRule fuller(double psi);
  double resolve(Index n_h, int p) const;
};

struct EstimateResult {
  double tau_hat = 0.0;
  double numerator = 0.0;    // lambda-class numerator, expanded form
  double denominator = 0.0;  // lambda-class denominator, expanded form
  double tau_y_std = 0.0;    // tau_p^Y
  double tau_d_std = 0.0;    // tau_p^D
  double gamma = 0.0;        // Gamma~
  double lambda_used = 1.0;
  Index n_plus = 0, n_minus = 0;
  bool denominator_flagged = false;  // |tau_d_std| below the flag threshold
};

// Expanded-form lambda-class estimate. tau_y / tau_d / gamma are the pieces
// produced by frd_standard and gamma_tilde (or their generalisations after
// partialling out covariates).
EstimateResult tau_lambda(const WeightedData& wd, double tau_y, double tau_d,
                          double gamma, double lambda, double flag_eps = 1e-8,
                          double hard_eps = 1e-13);

// Replaces y, d, z by their residuals after projecting on [v | w]; v and w
// become empty so downstream operations see an identity projection.
WeightedData partial_out_covariates(const WeightedData& wd);

}  // namespace frd
