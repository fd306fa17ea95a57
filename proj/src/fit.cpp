#include "frdkit/fit.hpp"

#include <cmath>

#include "frdkit/errors.hpp"

namespace frd {

EstimatorConfig EstimatorConfig::from_name(const std::string& name) {
  EstimatorConfig cfg;
  cfg.name = name;
  cfg.p = 1;
  if (name == "standard") {
    cfg.kernel = KernelKind::Triangular;
    cfg.lambda = LambdaRule::raw(1.0);
  } else if (name == "lambda4") {
    cfg.kernel = KernelKind::Uniform;
    cfg.lambda = LambdaRule::fuller(4.0);
  } else if (name == "lambda1") {
    cfg.kernel = KernelKind::Uniform;
    cfg.lambda = LambdaRule::fuller(1.0);
  } else if (name == "ols") {
    cfg.kernel = KernelKind::Uniform;
    cfg.lambda = LambdaRule::raw(0.0);
  } else {
    fail(ErrorCode::InvalidInput,
         "unknown estimator '" + name +
             "' (expected standard, lambda4, lambda1, or ols)");
  }
  return cfg;
}

FitResult fit_with_bandwidth(const Sample& sample, const FitConfig& config,
                             double h) {
  const EstimatorConfig& ec = config.estimator;
  const EffectiveSample es = split_effective(sample, config.x0, h);
  WeightedData wd =
      weighted_transform(sample, es, config.x0, h, ec.p, ec.kernel);
  const double lambda = ec.lambda.resolve(wd.n_h, ec.p);

  double tau_y = 0.0;
  double tau_d = 0.0;
  double gamma = 0.0;
  const bool partial = config.use_covariates && sample.has_covariates();
  if (partial) {
    wd = partial_out_covariates(wd);
    // Generalised pieces: with covariates inside the projection, gamma and
    // the jump estimates come from the residualised instrument directly.
    gamma = wd.z.squaredNorm();
    if (!(gamma > 0.0)) {
      fail(ErrorCode::IllConditionedDesign,
           "instrument has no variation after partialling out covariates");
    }
    tau_d = wd.z.dot(wd.d) / gamma;
    tau_y = wd.z.dot(wd.y) / gamma;
    if (lambda == 1.0 && std::abs(tau_d) < 1e-13) {
      fail(ErrorCode::DegenerateDenominator,
           "treatment-probability jump is numerically zero");
    }
  } else {
    // hard_eps = 0: a vanishing jump only matters at lambda = 1, where
    // tau_lambda raises the error itself.
    const StandardFit sf = frd_standard(sample, config.x0, h, ec.p, ec.kernel,
                                        config.degenerate_flag_eps, 0.0);
    tau_y = sf.tau_y;
    tau_d = sf.tau_d;
    gamma = gamma_tilde(
        moment_matrix(sample, es.idx_plus, config.x0, h, ec.p, ec.kernel),
        moment_matrix(sample, es.idx_minus, config.x0, h, ec.p, ec.kernel));
  }

  FitResult out;
  out.est = tau_lambda(wd, tau_y, tau_d, gamma, lambda,
                       config.degenerate_flag_eps);
  VarianceSpec vs;
  vs.flavor = config.variance.flavor;
  if (sample.has_cluster()) {
    vs.cluster_ids.reserve(wd.row_index.size());
    for (const Index i : wd.row_index) {
      vs.cluster_ids.push_back(sample.cluster[static_cast<std::size_t>(i)]);
    }
  }
  out.variance = variance_lambda(wd, out.est, vs);
  out.ci = confidence_interval(out.est.tau_hat, out.variance, wd.n_h,
                               config.ci_level, config.crit_law);
  out.h_used = h;
  out.n_h = wd.n_h;
  return out;
}

FitResult fit(const Sample& sample, const FitConfig& config) {
  const double h = select_bandwidth(config.bandwidth, sample, config.x0,
                                    config.estimator.p, config.estimator.kernel);
  return fit_with_bandwidth(sample, config, h);
}

}  // namespace frd
