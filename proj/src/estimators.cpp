#include "frdkit/estimators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <string>

#include "frdkit/errors.hpp"

namespace frd {

WeightedData weighted_transform(const Sample& sample,
                                const EffectiveSample& es, double x0, double h,
                                int p, KernelKind kernel) {
  if (es.n_plus() == 0 || es.n_minus() == 0) {
    fail(ErrorCode::InsufficientSample,
         "effective sample must be nonempty on both sides of the cutoff");
  }
  if (p < 0) fail(ErrorCode::InvalidInput, "polynomial order must be >= 0");

  WeightedData wd;
  wd.p = p;
  wd.n_h = es.n_h();
  wd.n_plus = es.n_plus();
  wd.n_minus = es.n_minus();

  // Count rows with strictly positive kernel weight, plus side first.
  std::vector<std::pair<Index, double>> rows;  // (sample row, sqrt(K))
  rows.reserve(static_cast<std::size_t>(es.n_h()));
  for (const Index i : es.idx_plus) {
    const double k = kernel_eval_scaled(kernel, sample.x[i], x0, h);
    if (k > 0.0) rows.emplace_back(i, std::sqrt(k));
  }
  const std::size_t plus_rows = rows.size();
  for (const Index i : es.idx_minus) {
    const double k = kernel_eval_scaled(kernel, sample.x[i], x0, h);
    if (k > 0.0) rows.emplace_back(i, std::sqrt(k));
  }

  const Index m = static_cast<Index>(rows.size());
  const Index vcols = 2 * p + 1;
  const Index qcols = sample.w.cols();
  wd.y.resize(m);
  wd.d.resize(m);
  wd.z.resize(m);
  wd.v.resize(m, vcols);
  wd.w.resize(m, qcols);
  wd.row_index.resize(rows.size());

  for (Index r = 0; r < m; ++r) {
    const auto [i, sk] = rows[static_cast<std::size_t>(r)];
    const bool above = static_cast<std::size_t>(r) < plus_rows;
    const double dx = sample.x[i] - x0;
    wd.row_index[static_cast<std::size_t>(r)] = i;
    wd.y[r] = sk * sample.y[i];
    wd.d[r] = sk * sample.d[i];
    wd.z[r] = above ? sk : 0.0;
    wd.v(r, 0) = sk;
    double pow = 1.0;
    for (int j = 1; j <= p; ++j) {
      pow *= dx;
      wd.v(r, 2 * j - 1) = above ? sk * pow : 0.0;
      wd.v(r, 2 * j) = above ? 0.0 : sk * pow;
    }
    for (Index c = 0; c < qcols; ++c) wd.w(r, c) = sk * sample.w(i, c);
  }
  wd.model_params = static_cast<int>(vcols + qcols) + 1;
  return wd;
}

double gamma_side(const Eigen::MatrixXd& side_moment) {
  const Index dim = side_moment.rows();
  double gamma = side_moment(0, 0);
  if (dim > 1) {
    const Eigen::VectorXd r = side_moment.block(1, 0, dim - 1, 1);
    const Eigen::MatrixXd u = side_moment.block(1, 1, dim - 1, dim - 1);
    Eigen::LLT<Eigen::MatrixXd> llt(u);
    if (llt.info() != Eigen::Success) {
      fail(ErrorCode::IllConditionedDesign,
           "lower moment block is not positive definite");
    }
    gamma -= r.dot(llt.solve(r));
  }
  if (!(gamma > 0.0)) {
    fail(ErrorCode::IllConditionedDesign,
         "Schur complement of the side moment matrix is not positive");
  }
  return gamma;
}

double gamma_tilde(const Eigen::MatrixXd& moment_plus,
                   const Eigen::MatrixXd& moment_minus) {
  const double gp = gamma_side(moment_plus);
  const double gm = gamma_side(moment_minus);
  return gp * gm / (gp + gm);
}

Eigen::MatrixXd residualize(const WeightedData& wd, const Eigen::MatrixXd& b) {
  if (wd.v.cols() == 0) return b;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wd.v);
  if (qr.rank() < wd.v.cols()) {
    fail(ErrorCode::IllConditionedDesign,
         "weighted regressor matrix is rank deficient");
  }
  return b - wd.v * qr.solve(b);
}

double tau_iv(const WeightedData& wd, double hard_eps) {
  const Eigen::VectorXd z_res = residualize(wd, wd.z);
  const double gamma_proj = z_res.squaredNorm();  // z'Mz
  if (!(gamma_proj > 0.0)) {
    fail(ErrorCode::IllConditionedDesign,
         "instrument has no variation after projection");
  }
  const double zmd = z_res.dot(wd.d);
  if (std::abs(zmd) / gamma_proj < hard_eps) {
    fail(ErrorCode::DegenerateDenominator,
         "instrument-treatment moment is numerically zero");
  }
  return z_res.dot(wd.y) / zmd;
}

double lambda_from_psi(double psi, Index n_h, int p) {
  const double dof = static_cast<double>(n_h) - 2.0 * (p + 1);
  if (!(dof > 0.0)) {
    fail(ErrorCode::InsufficientSample,
         "effective sample too small for the Fuller-style rule: n_h = " +
             std::to_string(n_h) + " <= 2(p+1)");
  }
  if (!(psi >= 0.0) || psi > dof) {
    fail(ErrorCode::InvalidInput,
         "psi must lie in [0, n_h - 2(p+1)]");
  }
  return 1.0 - psi / dof;
}

LambdaRule LambdaRule::raw(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    fail(ErrorCode::InvalidInput, "lambda must lie in [0, 1]");
  }
  return LambdaRule{Kind::Raw, lambda};
}

LambdaRule LambdaRule::fuller(double psi) {
  if (!(psi >= 0.0)) {
    fail(ErrorCode::InvalidInput, "psi must be nonnegative");
  }
  return LambdaRule{Kind::FullerPsi, psi};
}

double LambdaRule::resolve(Index n_h, int p) const {
  switch (kind) {
    case Kind::Raw:
      return value;
    case Kind::FullerPsi:
      return lambda_from_psi(value, n_h, p);
  }
  fail(ErrorCode::InvalidInput, "unknown lambda rule");
}

EstimateResult tau_lambda(const WeightedData& wd, double tau_y, double tau_d,
                          double gamma, double lambda, double flag_eps,
                          double hard_eps) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    fail(ErrorCode::InvalidInput, "lambda must lie in [0, 1]");
  }
  if (!(gamma > 0.0)) {
    fail(ErrorCode::IllConditionedDesign, "gamma must be positive");
  }
  EstimateResult res;
  res.tau_y_std = tau_y;
  res.tau_d_std = tau_d;
  res.gamma = gamma;
  res.lambda_used = lambda;
  res.n_plus = wd.n_plus;
  res.n_minus = wd.n_minus;
  res.denominator_flagged = std::abs(tau_d) < flag_eps;

  double dmd = 0.0;
  double dmy = 0.0;
  if (lambda < 1.0) {
    const Eigen::VectorXd d_res = residualize(wd, wd.d);
    dmd = d_res.squaredNorm();       // d'Md
    dmy = d_res.dot(wd.y);           // d'My
    const double scale = std::max(1.0, wd.d.squaredNorm());
    if (dmd <= 1e-12 * scale) {
      fail(ErrorCode::NoIdentification,
           "no residual treatment variation: d lies in the span of the "
           "included regressors");
    }
  } else if (std::abs(tau_d) < hard_eps) {
    fail(ErrorCode::DegenerateDenominator,
         "treatment-probability jump is numerically zero");
  }

  res.numerator = lambda * gamma * tau_y * tau_d + (1.0 - lambda) * dmy;
  res.denominator = lambda * gamma * tau_d * tau_d + (1.0 - lambda) * dmd;
  res.tau_hat = res.numerator / res.denominator;
  return res;
}

WeightedData partial_out_covariates(const WeightedData& wd) {
  if (wd.w.cols() == 0) {
    fail(ErrorCode::InvalidInput, "no covariates to partial out");
  }
  // Zero covariate columns carry no information; drop them before the rank
  // check so only genuine collinearity is rejected.
  std::vector<Index> keep;
  for (Index c = 0; c < wd.w.cols(); ++c) {
    if (wd.w.col(c).cwiseAbs().maxCoeff() > 0.0) keep.push_back(c);
  }
  Eigen::MatrixXd q(wd.rows(), wd.v.cols() + static_cast<Index>(keep.size()));
  q.leftCols(wd.v.cols()) = wd.v;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    q.col(wd.v.cols() + static_cast<Index>(j)) = wd.w.col(keep[j]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(q);
  if (qr.rank() < q.cols()) {
    fail(ErrorCode::CollinearCovariates,
         "covariates are collinear with the included regressors");
  }
  WeightedData out = wd;
  Eigen::MatrixXd stacked(wd.rows(), 3);
  stacked.col(0) = wd.y;
  stacked.col(1) = wd.d;
  stacked.col(2) = wd.z;
  const Eigen::MatrixXd res = stacked - q * qr.solve(stacked);
  out.y = res.col(0);
  out.d = res.col(1);
  out.z = res.col(2);
  out.v.resize(wd.rows(), 0);
  out.w.resize(wd.rows(), 0);
  out.model_params = static_cast<int>(q.cols()) + 1;
  out.partialled = true;
  return out;
}

}  // namespace frd
