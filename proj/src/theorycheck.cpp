#include "frdkit/theorycheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "frdkit/errors.hpp"

namespace frd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_factorial(std::int64_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// k * log(p) with the 0 * log(0) = 0 convention.
double xlogy(std::int64_t k, double p) {
  if (k == 0) return 0.0;
  if (p <= 0.0) return kNegInf;
  return static_cast<double>(k) * std::log(p);
}

// log of n! / (n0! n1! n2!) * p0^n0 p1^n1 p2^n2
double log_trinomial_term(const TruncatedMultinomialSpec& spec,
                          std::int64_t n1, std::int64_t n2) {
  const std::int64_t n0 = spec.n - n1 - n2;
  return log_factorial(spec.n) - log_factorial(n0) - log_factorial(n1) -
         log_factorial(n2) + xlogy(n1, spec.p1) + xlogy(n2, spec.p2) +
         xlogy(n0, spec.p0());
}

// Kahan-compensated accumulator for the exp-shifted sums.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double log_kappa(const TruncatedMultinomialSpec& spec) {
  // log-sum-exp over the admissible grid, shifted by the largest term.
  double max_term = kNegInf;
  for (std::int64_t n1 = spec.alpha1 + 1; n1 <= spec.n - (spec.alpha2 + 1);
       ++n1) {
    for (std::int64_t n2 = spec.alpha2 + 1; n2 <= spec.n - n1; ++n2) {
      max_term = std::max(max_term, log_trinomial_term(spec, n1, n2));
    }
  }
  if (max_term == kNegInf) {
    fail(ErrorCode::InvalidInput,
         "truncation leaves no admissible multinomial outcomes");
  }
  CompensatedSum acc;
  for (std::int64_t n1 = spec.alpha1 + 1; n1 <= spec.n - (spec.alpha2 + 1);
       ++n1) {
    for (std::int64_t n2 = spec.alpha2 + 1; n2 <= spec.n - n1; ++n2) {
      acc.add(std::exp(log_trinomial_term(spec, n1, n2) - max_term));
    }
  }
  return max_term + std::log(acc.sum);
}

}  // namespace

void TruncatedMultinomialSpec::validate() const {
  if (n < 1) fail(ErrorCode::InvalidInput, "n must be >= 1");
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || !(p0() >= -1e-15)) {
    fail(ErrorCode::InvalidInput,
         "cell probabilities must be nonnegative and sum to at most 1");
  }
  if (alpha1 < -1 || alpha2 < -1) {
    fail(ErrorCode::InvalidInput, "trunction thresholds must be >= -1");
  }
  if (alpha1 + 1 + alpha2 + 1 > n) {
    fail(ErrorCode::InvalidInput,
         "truncation thresholds exceed the number of trials");
  }
}

double truncation_kappa(const TruncatedMultinomialSpec& spec) {
  spec.validate();
  return std::exp(log_kappa(spec));
}

double truncated_multinomial_pmf(const TruncatedMultinomialSpec& spec,
                                 std::int64_t n1, std::int64_t n2) {
  spec.validate();
  if (n1 <= spec.alpha1 || n2 <= spec.alpha2 || n1 < 0 || n2 < 0 ||
      n1 + n2 > spec.n) {
    return 0.0;
  }
  return std::exp(log_trinomial_term(spec, n1, n2) - log_kappa(spec));
}

double truncated_binomial_marginal(const TruncatedMultinomialSpec& spec,
                                   int cell, std::int64_t m) {
  spec.validate();
  if (cell != 1 && cell != 2) {
    fail(ErrorCode::InvalidInput, "cell must be 1 or 2");
  }
  const std::int64_t a_own = cell == 1 ? spec.alpha1 : spec.alpha2;
  const std::int64_t a_other = cell == 1 ? spec.alpha2 : spec.alpha1;
  const double p_own = cell == 1 ? spec.p1 : spec.p2;
  const double p_other = cell == 1 ? spec.p2 : spec.p1;
  if (m <= a_own || m < 0 || m > spec.n - (a_other + 1)) return 0.0;

  // P{Y_i = m | A} = kappa^{-1} * W * Binomial(n, p_i) pmf at m, where W
  // sums the conditional mass of the other cell above its threshold.
  const double one_minus = 1.0 - p_own;
  const double log_r_other =
      (p_other > 0.0 && one_minus > 0.0) ? std::log(p_other / one_minus)
                                         : kNegInf;
  const double log_r_zero =
      (spec.p0() > 0.0 && one_minus > 0.0) ? std::log(spec.p0() / one_minus)
                                           : kNegInf;
  const std::int64_t rest = spec.n - m;
  double max_term = kNegInf;
  auto log_w_term = [&](std::int64_t nj) {
    const std::int64_t n0 = rest - nj;
    double t = log_factorial(rest) - log_factorial(nj) - log_factorial(n0);
    t += nj == 0 ? 0.0 : (log_r_other == kNegInf ? kNegInf
                                                 : static_cast<double>(nj) *
                                                       log_r_other);
    t += n0 == 0 ? 0.0 : (log_r_zero == kNegInf ? kNegInf
                                                : static_cast<double>(n0) *
                                                      log_r_zero);
    return t;
  };
  for (std::int64_t nj = a_other + 1; nj <= rest; ++nj) {
    max_term = std::max(max_term, log_w_term(nj));
  }
  if (max_term == kNegInf) return 0.0;
  CompensatedSum acc;
  for (std::int64_t nj = a_other + 1; nj <= rest; ++nj) {
    acc.add(std::exp(log_w_term(nj) - max_term));
  }
  const double log_w = max_term + std::log(acc.sum);
  const double log_binom = log_factorial(spec.n) - log_factorial(m) -
                           log_factorial(rest) + xlogy(m, p_own) +
                           xlogy(rest, one_minus);
  return std::exp(log_w + log_binom - log_kappa(spec));
}

Sample make_symmetric_sample(const std::vector<double>& offsets,
                             const std::vector<int>& d_pattern, double x0) {
  const std::size_t m = offsets.size();
  if (m == 0 || d_pattern.size() != m) {
    fail(ErrorCode::InvalidInput,
         "offsets and treatment pattern must have equal positive length");
  }
  bool any0 = false, any1 = false;
  for (const int d : d_pattern) {
    if (d == 0) {
      any0 = true;
    } else if (d == 1) {
      any1 = true;
    } else {
      fail(ErrorCode::InvalidInput, "treatment pattern entries must be 0 or 1");
    }
  }
  if (!any0 || !any1) {
    fail(ErrorCode::InvalidInput,
         "treatment pattern needs both treated and untreated entries");
  }
  for (const double off : offsets) {
    if (!(off > 0.0) || !std::isfinite(off)) {
      fail(ErrorCode::InvalidInput, "offsets must be positive and finite");
    }
  }
  Sample s;
  const Index total = static_cast<Index>(2 * m);
  s.x.resize(total);
  s.y = Eigen::VectorXd::Zero(total);
  s.d.resize(total);
  s.w.resize(total, 0);
  for (std::size_t i = 0; i < m; ++i) {
    s.x[static_cast<Index>(i)] = x0 + offsets[i];
    s.x[static_cast<Index>(i + m)] = x0 - offsets[i];
    s.d[static_cast<Index>(i)] = static_cast<double>(d_pattern[i]);
    s.d[static_cast<Index>(i + m)] = static_cast<double>(d_pattern[i]);
  }
  return s;
}

DenominatorProbe denominator_probe(const DgpSpec& dgp,
                                   const EstimatorConfig& estimator,
                                   const BandwidthRule& bandwidth,
                                   std::int64_t reps, std::uint64_t seed,
                                   std::vector<double> eps_grid, int threads) {
  if (reps < 1000) {
    fail(ErrorCode::InvalidInput, "denominator probe needs reps >= 1000");
  }
  if (eps_grid.empty()) {
    fail(ErrorCode::InvalidInput, "epsilon grid must be nonempty");
  }
  for (const double e : eps_grid) {
    if (std::isnan(e) || e < 0.0) {
      fail(ErrorCode::InvalidInput, "epsilon values must be nonnegative");
    }
  }

  struct Cell {
    bool ok = false;
    double tau_d = 0.0;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(reps));
  detail::parallel_reps(reps, threads, [&](std::int64_t r) {
    CounterRng rng(seed, static_cast<std::uint64_t>(r));
    const Sample s = draw_sample(dgp, rng);
    try {
      const double h = select_bandwidth(bandwidth, s, dgp.x0, estimator.p,
                                        estimator.kernel);
      const StandardFit sf = frd_standard(s, dgp.x0, h, estimator.p,
                                          estimator.kernel, 1e-8, 0.0);
      cells[static_cast<std::size_t>(r)] = Cell{true, sf.tau_d};
    } catch (const Error&) {
      // rep stays failed
    }
  });

  DenominatorProbe probe;
  probe.eps = std::move(eps_grid);
  std::vector<double> taus;
  taus.reserve(cells.size());
  for (const Cell& c : cells) {
    if (c.ok) {
      taus.push_back(std::abs(c.tau_d));
    } else {
      ++probe.reps_failed;
    }
  }
  probe.reps_used = static_cast<std::int64_t>(taus.size());
  if (probe.reps_used == 0) {
    fail(ErrorCode::EmptySummary, "every probe repetition failed");
  }
  for (const double eps : probe.eps) {
    std::int64_t hits = 0;
    for (const double t : taus) {
      if (t < eps) ++hits;
    }
    const double p =
        static_cast<double>(hits) / static_cast<double>(probe.reps_used);
    probe.prob.push_back(p);
    probe.std_error.push_back(
        std::sqrt(p * (1.0 - p) / static_cast<double>(probe.reps_used)));
  }
  return probe;
}

}  // namespace frd
