#include "frdkit/inference.hpp"

#include <Eigen/QR>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <unordered_map>

#include "frdkit/errors.hpp"

namespace frd {

Eigen::VectorXd lambda_residuals(const WeightedData& wd, double tau_hat) {
  const Eigen::VectorXd partial = wd.y - tau_hat * wd.d;
  if (wd.v.cols() == 0) return partial;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wd.v);
  if (qr.rank() < wd.v.cols()) {
    fail(ErrorCode::IllConditionedDesign,
         "weighted regressor matrix is rank deficient");
  }
  return partial - wd.v * qr.solve(partial);
}

double variance_lambda(const WeightedData& wd, const EstimateResult& est,
                       const VarianceSpec& spec) {
  if (!(est.denominator > 0.0)) {
    fail(ErrorCode::DegenerateVariance,
         "lambda-class denominator must be positive for variance estimation");
  }
  const Index m = wd.rows();
  const Index dof = m - wd.model_params;
  if (dof <= 0) {
    fail(ErrorCode::InsufficientSample,
         "no residual degrees of freedom for variance estimation");
  }

  const Eigen::VectorXd z_res = residualize(wd, wd.z);
  const Eigen::VectorXd u = lambda_residuals(wd, est.tau_hat);

  // meat = z_res' Omega z_res for the chosen error structure.
  double meat = 0.0;
  if (spec.clustered()) {
    if (static_cast<Index>(spec.cluster_ids.size()) != m) {
      fail(ErrorCode::InvalidInput,
           "cluster ids must align with the weighted-data rows");
    }
    std::unordered_map<std::int64_t, double> score;
    for (Index i = 0; i < m; ++i) {
      score[spec.cluster_ids[static_cast<std::size_t>(i)]] += z_res[i] * u[i];
    }
    for (const auto& [id, s] : score) meat += s * s;
  } else {
    switch (spec.flavor) {
      case VarianceFlavor::Homoskedastic: {
        const double sigma2 = u.squaredNorm() / static_cast<double>(dof);
        meat = sigma2 * z_res.squaredNorm();
        break;
      }
      case VarianceFlavor::HC0:
      case VarianceFlavor::HC1: {
        meat = z_res.cwiseProduct(u).squaredNorm();
        if (spec.flavor == VarianceFlavor::HC1) {
          meat *= static_cast<double>(m) / static_cast<double>(dof);
        }
        break;
      }
    }
  }

  // P_{Mz} d = z_res (z_res'd) / (z_res'z_res) and z_res'd = gamma * tau_d,
  // so the numerator collapses to tau_d^2 * meat.
  const double numerator = est.tau_d_std * est.tau_d_std * meat;
  return static_cast<double>(wd.n_h) * numerator /
         (est.denominator * est.denominator);
}

double t_stat(double tau_hat, double tau_null, double v_hat, Index n_h) {
  if (!(v_hat > 0.0)) {
    fail(ErrorCode::DegenerateVariance, "variance estimate must be positive");
  }
  return std::sqrt(static_cast<double>(n_h)) * (tau_hat - tau_null) /
         std::sqrt(v_hat);
}

double critical_value(CritLaw law, double level, Index n_h) {
  if (!(level > 0.0 && level < 1.0)) {
    fail(ErrorCode::InvalidInput, "confidence level must lie in (0, 1)");
  }
  const double prob = 1.0 - (1.0 - level) / 2.0;
  switch (law) {
    case CritLaw::Normal:
      return boost::math::quantile(boost::math::normal_distribution<>(), prob);
    case CritLaw::StudentT: {
      if (n_h <= 0) {
        fail(ErrorCode::InvalidInput, "t critical value needs n_h > 0");
      }
      return boost::math::quantile(
          boost::math::students_t_distribution<>(static_cast<double>(n_h)),
          prob);
    }
  }
  fail(ErrorCode::InvalidInput, "unknown critical-value law");
}

ConfidenceInterval confidence_interval(double tau_hat, double v_hat,
                                       Index n_h, double level, CritLaw law) {
  if (!(v_hat >= 0.0)) {
    fail(ErrorCode::InvalidInput, "variance must be nonnegative");
  }
  const double c = critical_value(law, level, n_h);
  const double half = c * std::sqrt(v_hat / static_cast<double>(n_h));
  return ConfidenceInterval{tau_hat - half, tau_hat + half, level, law};
}

}  // namespace frd
