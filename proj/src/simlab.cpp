#include "frdkit/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "frdkit/errors.hpp"

namespace frd {

RegressionDesign design_from_name(const std::string& name) {
  if (name == "lee") return RegressionDesign::Lee;
  if (name == "ludwig") return RegressionDesign::Ludwig;
  fail(ErrorCode::InvalidInput,
       "unknown design '" + name + "' (expected lee or ludwig)");
}

AssignmentRule pi_rule_from_name(const std::string& name) {
  if (name == "pi1") return AssignmentRule::Pi1;
  if (name == "pi2") return AssignmentRule::Pi2;
  if (name == "pi3") return AssignmentRule::Pi3;
  fail(ErrorCode::InvalidInput,
       "unknown assignment rule '" + name + "' (expected pi1, pi2, or pi3)");
}

RunningLaw x_law_from_name(const std::string& name) {
  if (name == "normal") return RunningLaw::StdNormal;
  if (name == "uniform") return RunningLaw::UniformSym;
  if (name == "beta") return RunningLaw::ScaledBeta;
  fail(ErrorCode::InvalidInput,
       "unknown running-variable law '" + name +
           "' (expected normal, uniform, or beta)");
}

const char* design_name(RegressionDesign d) {
  return d == RegressionDesign::Lee ? "lee" : "ludwig";
}
const char* pi_rule_name(AssignmentRule r) {
  switch (r) {
    case AssignmentRule::Pi1:
      return "pi1";
    case AssignmentRule::Pi2:
      return "pi2";
    case AssignmentRule::Pi3:
      return "pi3";
  }
  return "?";
}
const char* x_law_name(RunningLaw l) {
  switch (l) {
    case RunningLaw::StdNormal:
      return "normal";
    case RunningLaw::UniformSym:
      return "uniform";
    case RunningLaw::ScaledBeta:
      return "beta";
  }
  return "?";
}

double default_tau(RegressionDesign design) {
  return design == RegressionDesign::Lee ? 0.04 : -3.44;
}

void DgpSpec::validate() const {
  if (!(pi_plus > 0.5 && pi_plus <= 1.0)) {
    fail(ErrorCode::InvalidInput, "pi_plus must lie in (0.5, 1]");
  }
  if (!(sigma_u2 >= 0.0)) {
    fail(ErrorCode::InvalidInput, "sigma_u2 must be nonnegative");
  }
  if (n < 1) fail(ErrorCode::InvalidInput, "n must be >= 1");
}

double m_eval(RegressionDesign kind, double x) {
  if (!std::isfinite(x)) {
    fail(ErrorCode::InvalidInput, "running variable must be finite");
  }
  // Horner over the printed coefficients, constant term first.
  static constexpr double lee_lo[6] = {0.48, 1.27, 7.18, 20.21, 21.54, 7.33};
  static constexpr double lee_hi[6] = {0.48, 0.84, -3.00, 7.99, -9.01, 3.56};
  static constexpr double lud_lo[6] = {3.70, 2.99, 3.28, 1.45, 0.22, 0.03};
  static constexpr double lud_hi[6] = {3.70, 18.49, -54.80, 74.30, -45.02,
                                       9.83};
  const double* c = nullptr;
  if (kind == RegressionDesign::Lee) {
    c = x < 0.0 ? lee_lo : lee_hi;
  } else {
    c = x < 0.0 ? lud_lo : lud_hi;
  }
  double acc = 0.0;
  for (int j = 5; j >= 0; --j) acc = acc * x + c[j];
  return acc;
}

double pi_eval(AssignmentRule kind, double x, double pi_plus) {
  if (!(pi_plus > 0.5 && pi_plus <= 1.0)) {
    fail(ErrorCode::InvalidInput, "pi_plus must lie in (0.5, 1]");
  }
  const double pm = 1.0 - pi_plus;
  double p = 0.0;
  switch (kind) {
    case AssignmentRule::Pi1:
      p = x < 0.0 ? pm : pi_plus;
      break;
    case AssignmentRule::Pi2:
      if (x >= 1.0) {
        p = 1.0;
      } else if (x >= 0.0) {
        p = pm * x + pi_plus;
      } else {
        p = std::clamp(pm * (x + 1.0), 0.0, 1.0);
      }
      break;
    case AssignmentRule::Pi3:
      p = x < 0.0 ? pm * std::exp(0.2 * x)
                  : pi_plus + pm * (1.0 - std::exp(-0.2 * x));
      break;
  }
  if (p < -1e-12 || p > 1.0 + 1e-12) {
    fail(ErrorCode::InvalidInput,
         "internal invariant violation: assignment probability outside [0,1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

Sample draw_sample(const DgpSpec& spec, CounterRng& rng) {
  spec.validate();
  Sample s;
  s.x.resize(spec.n);
  s.y.resize(spec.n);
  s.d.resize(spec.n);
  s.w.resize(spec.n, 0);
  const double sigma_u = std::sqrt(spec.sigma_u2);
  for (Index i = 0; i < spec.n; ++i) {
    double x = 0.0;
    switch (spec.x_law) {
      case RunningLaw::StdNormal:
        x = rng.normal();
        break;
      case RunningLaw::UniformSym:
        x = 2.0 * rng.uniform() - 1.0;
        break;
      case RunningLaw::ScaledBeta:
        x = 2.0 * rng.beta(2.0, 4.0) - 1.0;
        break;
    }
    // x is drawn relative to the cutoff; the stored running variable is
    // shifted so the discontinuity sits at spec.x0.
    const double d =
        rng.bernoulli(pi_eval(spec.pi_kind, x, spec.pi_plus)) ? 1.0 : 0.0;
    const double u = sigma_u * rng.normal();
    s.x[i] = spec.x0 + x;
    s.d[i] = d;
    s.y[i] = m_eval(spec.m_kind, x) + spec.tau_true * d + u;
  }
  return s;
}

Sample draw_sample(const DgpSpec& spec, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  return draw_sample(spec, rng);
}

Metrics compute_metrics(const std::vector<double>& estimates, double tau_true,
                        const std::vector<ConfidenceInterval>* intervals) {
  if (estimates.empty()) {
    fail(ErrorCode::EmptySummary, "no estimates to summarise");
  }
  std::vector<double> sorted = estimates;
  std::sort(sorted.begin(), sorted.end());
  const auto median_of = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  const double med = median_of(sorted);

  Metrics m;
  m.median_bias = med - tau_true;

  std::vector<double> dev(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    dev[i] = std::abs(sorted[i] - med);
  }
  std::sort(dev.begin(), dev.end());
  m.mad = median_of(dev);

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    dev[i] = std::abs(sorted[i] - tau_true);
  }
  std::sort(dev.begin(), dev.end());
  m.mad_about_true = median_of(dev);

  double sq = 0.0, sum = 0.0;
  for (const double t : estimates) {
    sq += (t - tau_true) * (t - tau_true);
    sum += t - tau_true;
  }
  m.rmse = std::sqrt(sq / static_cast<double>(estimates.size()));
  m.mean_bias = sum / static_cast<double>(estimates.size());

  if (intervals != nullptr) {
    if (intervals->size() != estimates.size()) {
      fail(ErrorCode::InvalidInput,
           "intervals must align with the estimates");
    }
    double covered = 0.0, len = 0.0;
    for (const auto& ci : *intervals) {
      covered += ci.contains(tau_true) ? 1.0 : 0.0;
      len += ci.length();
    }
    m.coverage_pct = 100.0 * covered / static_cast<double>(intervals->size());
    m.mean_length = len / static_cast<double>(intervals->size());
  }
  return m;
}

double sample_quantile(const std::vector<double>& sorted_values, double prob) {
  if (sorted_values.empty()) {
    fail(ErrorCode::InvalidInput, "quantile of an empty vector");
  }
  if (!(prob >= 0.0 && prob <= 1.0)) {
    fail(ErrorCode::InvalidInput, "quantile probability outside [0, 1]");
  }
  const std::size_t n = sorted_values.size();
  if (n == 1) return sorted_values[0];
  const double pos = prob * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= n) return sorted_values[n - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[lo + 1] * frac;
}

namespace detail {

void parallel_reps(std::int64_t reps, int threads,
                   const std::function<void(std::int64_t)>& body) {
  const int workers = std::max(1, threads);
  if (workers == 1) {
    for (std::int64_t r = 0; r < reps; ++r) body(r);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto loop = [&] {
    for (;;) {
      const std::int64_t r = next.fetch_add(1);
      if (r >= reps) break;
      try {
        body(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

namespace {

struct RepCell {
  bool ok = false;
  double tau = 0.0;
  ConfidenceInterval ci;
  bool near_degenerate = false;
};

// One row per rep, one column per estimator; filled in parallel, aggregated
// in rep order so summaries are independent of scheduling.
std::vector<RepCell> run_all_reps(const McConfig& cfg) {
  cfg.dgp.validate();
  if (cfg.reps < 1) fail(ErrorCode::InvalidInput, "reps must be >= 1");
  if (cfg.estimators.empty()) {
    fail(ErrorCode::InvalidInput, "at least one estimator is required");
  }
  int max_p = 0;
  for (const auto& e : cfg.estimators) max_p = std::max(max_p, e.p);

  const std::size_t n_est = cfg.estimators.size();
  std::vector<RepCell> cells(static_cast<std::size_t>(cfg.reps) * n_est);

  detail::parallel_reps(cfg.reps, cfg.threads, [&](std::int64_t r) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(r));
    const Sample s = draw_sample(cfg.dgp, rng);
    RepCell* row = cells.data() + static_cast<std::size_t>(r) * n_est;

    double h = 0.0;
    try {
      h = select_bandwidth(cfg.bandwidth, s, cfg.dgp.x0, max_p,
                           cfg.estimators.front().kernel);
    } catch (const Error&) {
      return;  // whole rep flagged for every estimator
    }
    for (std::size_t e = 0; e < n_est; ++e) {
      FitConfig fc;
      fc.x0 = cfg.dgp.x0;
      fc.estimator = cfg.estimators[e];
      fc.variance.flavor = cfg.variance;
      fc.ci_level = cfg.ci_level;
      fc.crit_law = cfg.crit_law;
      fc.degenerate_flag_eps = cfg.degenerate_flag_eps;
      try {
        const FitResult fr = fit_with_bandwidth(s, fc, h);
        row[e] = RepCell{true, fr.est.tau_hat, fr.ci,
                         fr.est.denominator_flagged};
      } catch (const Error&) {
        // leave the cell excluded
      }
    }
  });
  return cells;
}

}  // namespace

std::vector<McSummary> run_mc(const McConfig& cfg) {
  const std::vector<RepCell> cells = run_all_reps(cfg);
  const std::size_t n_est = cfg.estimators.size();

  std::vector<McSummary> out;
  out.reserve(n_est);
  for (std::size_t e = 0; e < n_est; ++e) {
    std::vector<double> estimates;
    std::vector<ConfidenceInterval> intervals;
    std::int64_t flagged = 0, near = 0;
    for (std::int64_t r = 0; r < cfg.reps; ++r) {
      const RepCell& cell = cells[static_cast<std::size_t>(r) * n_est + e];
      if (!cell.ok) {
        ++flagged;
        continue;
      }
      estimates.push_back(cell.tau);
      intervals.push_back(cell.ci);
      if (cell.near_degenerate) ++near;
    }
    if (estimates.empty()) {
      fail(ErrorCode::EmptySummary,
           "every repetition was degenerate for estimator '" +
               cfg.estimators[e].name + "'");
    }
    McSummary s;
    s.estimator = cfg.estimators[e].name;
    s.reps_requested = cfg.reps;
    s.reps_completed = static_cast<std::int64_t>(estimates.size());
    s.reps_flagged_degenerate = flagged;
    s.reps_near_degenerate = near;
    s.metrics = compute_metrics(estimates, cfg.dgp.tau_true, &intervals);
    s.seed = cfg.seed;
    out.push_back(std::move(s));
  }
  return out;
}

SamplingDistribution sampling_distribution(const McConfig& config,
                                           std::vector<double> quantile_probs) {
  if (config.reps < 100) {
    fail(ErrorCode::InvalidInput,
         "sampling-distribution diagnostics need at least 100 repetitions");
  }
  const std::vector<RepCell> cells = run_all_reps(config);
  const std::size_t n_est = config.estimators.size();

  SamplingDistribution out;
  out.quantile_probs = std::move(quantile_probs);
  for (std::size_t e = 0; e < n_est; ++e) {
    std::vector<double> taus;
    std::int64_t excluded = 0;
    for (std::int64_t r = 0; r < config.reps; ++r) {
      const RepCell& cell = cells[static_cast<std::size_t>(r) * n_est + e];
      if (cell.ok) {
        taus.push_back(cell.tau);
      } else {
        ++excluded;
      }
    }
    if (taus.empty()) {
      fail(ErrorCode::EmptySummary,
           "every repetition was degenerate for estimator '" +
               config.estimators[e].name + "'");
    }
    std::vector<double> abs_sorted(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
      abs_sorted[i] = std::abs(taus[i]);
    }
    std::sort(abs_sorted.begin(), abs_sorted.end());
    std::vector<double> q;
    q.reserve(out.quantile_probs.size());
    for (const double p : out.quantile_probs) {
      q.push_back(sample_quantile(abs_sorted, p));
    }
    out.estimators.push_back(config.estimators[e].name);
    out.estimates.push_back(std::move(taus));
    out.excluded.push_back(excluded);
    out.abs_quantiles.push_back(std::move(q));
  }

  // Figure-style reference calibrations anchor to the Fuller(4) estimator
  // when configured, else to the first one.
  std::size_t ref = 0;
  for (std::size_t e = 0; e < out.estimators.size(); ++e) {
    if (out.estimators[e] == "lambda4") {
      ref = e;
      break;
    }
  }
  out.calibration_estimator = out.estimators[ref];
  const std::vector<double>& base = out.estimates[ref];
  double mean = 0.0;
  for (const double t : base) mean += t;
  mean /= static_cast<double>(base.size());
  double var = 0.0;
  for (const double t : base) var += (t - mean) * (t - mean);
  out.normal_variance = var / static_cast<double>(base.size());
  std::vector<double> sorted = base;
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
  out.cauchy_scale = 0.5 * iqr;  // Cauchy IQR equals twice the scale
  return out;
}

}  // namespace frd
