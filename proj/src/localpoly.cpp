#include "frdkit/localpoly.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "frdkit/errors.hpp"

namespace frd {

void Sample::validate() const {
  const Index size = x.size();
  if (size < 1) fail(ErrorCode::InvalidInput, "sample is empty");
  if (y.size() != size || d.size() != size) {
    fail(ErrorCode::InvalidInput, "x, y, d must have equal length");
  }
  if (w.cols() > 0 && w.rows() != size) {
    fail(ErrorCode::InvalidInput, "covariate matrix must have n rows");
  }
  if (!cluster.empty() && static_cast<Index>(cluster.size()) != size) {
    fail(ErrorCode::InvalidInput, "cluster ids must have length n");
  }
  for (Index i = 0; i < size; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      fail(ErrorCode::InvalidInput, "non-finite observation at row " +
                                        std::to_string(i));
    }
    if (d[i] != 0.0 && d[i] != 1.0) {
      fail(ErrorCode::InvalidInput,
           "treatment entries must be exactly 0 or 1");
    }
  }
}

EffectiveSample split_effective(const Sample& sample, double x0, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorCode::InvalidBandwidth, "bandwidth must be finite and positive");
  }
  EffectiveSample es;
  for (Index i = 0; i < sample.n(); ++i) {
    const double xi = sample.x[i];
    if (xi >= x0 && xi <= x0 + h) {
      es.idx_plus.push_back(i);
    } else if (xi >= x0 - h && xi < x0) {
      es.idx_minus.push_back(i);
    }
  }
  return es;
}

Eigen::VectorXd design_vector(double x, double x0, int p) {
  if (p < 0) fail(ErrorCode::InvalidInput, "polynomial order must be >= 0");
  Eigen::VectorXd v(p + 1);
  const double dx = x - x0;
  double pow = 1.0;
  for (int j = 0; j <= p; ++j) {
    v[j] = pow;
    pow *= dx;
  }
  return v;
}

namespace {

// Scale-free conditioning proxy: min eigenvalue must exceed 1e-10 * trace.
constexpr double kConditionRel = 1e-10;

struct SideMoments {
  Eigen::MatrixXd s;
  Eigen::VectorXd kernel_weights;
  double min_eig = 0.0;
};

SideMoments side_moments(const Sample& sample, const std::vector<Index>& side,
                         double x0, double h, int p, KernelKind kernel) {
  SideMoments out;
  const int dim = p + 1;
  out.s = Eigen::MatrixXd::Zero(dim, dim);
  out.kernel_weights.resize(static_cast<Index>(side.size()));
  Index active = 0;
  for (std::size_t r = 0; r < side.size(); ++r) {
    const Index i = side[r];
    const double k = kernel_eval_scaled(kernel, sample.x[i], x0, h);
    out.kernel_weights[static_cast<Index>(r)] = k;
    if (k > 0.0) {
      ++active;
      const Eigen::VectorXd hvec = design_vector(sample.x[i], x0, p);
      out.s.noalias() += k * hvec * hvec.transpose();
    }
  }
  if (active < dim) {
    fail(ErrorCode::InsufficientSample,
         "side needs at least p+1 observations with positive kernel weight "
         "(have " +
             std::to_string(active) + ", need " + std::to_string(dim) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.s);
  out.min_eig = eig.eigenvalues().minCoeff();
  if (!(out.min_eig > kConditionRel * out.s.trace())) {
    fail(ErrorCode::IllConditionedDesign,
         "side moment matrix is rank-deficient or badly scaled");
  }
  return out;
}

}  // namespace

Eigen::MatrixXd moment_matrix(const Sample& sample,
                              const std::vector<Index>& side, double x0,
                              double h, int p, KernelKind kernel) {
  return side_moments(sample, side, x0, h, p, kernel).s;
}

double SideFit::intercept(const Eigen::VectorXd& side_values) const {
  const Eigen::VectorXd kw = kernel_weights.cwiseProduct(weights);
  const double denom = kw.sum();  // equals 1 up to rounding
  return kw.dot(side_values) / denom;
}

SideFit side_weights(const Sample& sample, const std::vector<Index>& side,
                     double x0, double h, int p, KernelKind kernel) {
  SideMoments m = side_moments(sample, side, x0, h, p, kernel);
  SideFit fit;
  fit.moment_matrix = m.s;
  fit.kernel_weights = m.kernel_weights;
  fit.min_eigenvalue = m.min_eig;
  // omega_i = e1' S^{-1} H_i via an SPD factorisation of S.
  Eigen::LLT<Eigen::MatrixXd> llt(m.s);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::IllConditionedDesign,
         "side moment matrix is not positive definite");
  }
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(p + 1);
  e1[0] = 1.0;
  const Eigen::VectorXd s_inv_e1 = llt.solve(e1);
  fit.weights.resize(static_cast<Index>(side.size()));
  for (std::size_t r = 0; r < side.size(); ++r) {
    fit.weights[static_cast<Index>(r)] =
        s_inv_e1.dot(design_vector(sample.x[side[r]], x0, p));
  }
  return fit;
}

double boundary_estimate(const Sample& sample, const std::vector<Index>& side,
                         const Eigen::VectorXd& values, double x0, double h,
                         int p, KernelKind kernel) {
  const SideFit fit = side_weights(sample, side, x0, h, p, kernel);
  Eigen::VectorXd side_values(static_cast<Index>(side.size()));
  for (std::size_t r = 0; r < side.size(); ++r) {
    side_values[static_cast<Index>(r)] = values[side[r]];
  }
  return fit.intercept(side_values);
}

StandardFit frd_standard(const Sample& sample, double x0, double h, int p,
                         KernelKind kernel, double flag_eps, double hard_eps) {
  const EffectiveSample es = split_effective(sample, x0, h);
  const SideFit plus = side_weights(sample, es.idx_plus, x0, h, p, kernel);
  const SideFit minus = side_weights(sample, es.idx_minus, x0, h, p, kernel);

  auto subset = [](const Eigen::VectorXd& full, const std::vector<Index>& idx) {
    Eigen::VectorXd out(static_cast<Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out[static_cast<Index>(r)] = full[idx[r]];
    }
    return out;
  };

  StandardFit fit;
  fit.n_plus = es.n_plus();
  fit.n_minus = es.n_minus();
  fit.mu_plus = plus.intercept(subset(sample.y, es.idx_plus));
  fit.mu_minus = minus.intercept(subset(sample.y, es.idx_minus));
  fit.pi_plus = plus.intercept(subset(sample.d, es.idx_plus));
  fit.pi_minus = minus.intercept(subset(sample.d, es.idx_minus));
  fit.tau_y = fit.mu_plus - fit.mu_minus;
  fit.tau_d = fit.pi_plus - fit.pi_minus;
  if (std::abs(fit.tau_d) < hard_eps) {
    fail(ErrorCode::DegenerateDenominator,
         "treatment-probability jump is numerically zero");
  }
  fit.denominator_flagged = std::abs(fit.tau_d) < flag_eps;
  fit.tau_hat = fit.tau_y / fit.tau_d;
  return fit;
}

}  // namespace frd
