#include "injnorm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "injnorm/parallel.hpp"

namespace injnorm {

namespace {

double kahan_sum(std::span<const double> values) {
  double sum = 0.0, c = 0.0;
  for (double v : values) {
    const double term = v - c;
    const double next = sum + term;
    c = (next - sum) - term;
    sum = next;
  }
  return sum;
}

void mean_and_stderr(std::span<const double> values, double& mean,
                     double& stderr_of_mean) {
  const std::size_t n = values.size();
  mean = kahan_sum(values) / static_cast<double>(n);
  if (n < 2) {
    stderr_of_mean = 0.0;
    return;
  }
  double ss = 0.0, c = 0.0;
  for (double v : values) {
    const double dev = (v - mean) * (v - mean) - c;
    const double next = ss + dev;
    c = (next - ss) - dev;
    ss = next;
  }
  const double var = ss / static_cast<double>(n - 1);
  stderr_of_mean = std::sqrt(var / static_cast<double>(n));
}

}  // namespace

MomentEstimate moment_estimate(const DenseTensor& t, long long k, long long n,
                               SeedSpec seed, bool symmetric, int threads) {
  if (k < 1) throw std::invalid_argument("moment_estimate: k must be >= 1");
  if (n < 2) throw std::invalid_argument("moment_estimate: need at least 2 samples");
  if (symmetric && !is_symmetric(t, 1e-9)) {
    throw std::invalid_argument("moment_estimate: symmetric variant needs a symmetric tensor");
  }

  const std::size_t p = t.order();
  std::vector<double> vals(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    CounterRng rng(substream(seed, i));
    FactorTuple u{t.field(), {}};
    if (symmetric) {
      u.factors.assign(p, sample_uniform_sphere(t.shape()[0], t.field(), rng));
    } else {
      u = sample_unit_factor_tuple(t.shape(), t.field(), rng);
    }
    const double norm2 = std::norm(rank_one_overlap(t, u));
    vals[i] = std::pow(norm2, static_cast<double>(k));
  });

  MomentEstimate est;
  est.k = k;
  est.samples = n;
  est.seed = seed;
  mean_and_stderr(vals, est.mean, est.stderr_of_mean);
  return est;
}

VerificationReport verify_deterministic_bound(
    const DenseTensor& t, PrefactorKind variant, long long k, long long n,
    double slack_sigmas, SeedSpec seed, const EstimatorConfig& estimator,
    int threads, double prefactor_log_offset) {
  if (k > 16) {
    throw std::invalid_argument(
        "verify_deterministic_bound: k capped at 16 to keep |overlap|^{2k} in range");
  }
  const bool symmetric = variant == PrefactorKind::complex_sym;
  if (variant == PrefactorKind::real_asym && t.field() != Field::real) {
    throw std::invalid_argument("verify_deterministic_bound: real variant on complex tensor");
  }
  if (variant != PrefactorKind::real_asym && t.field() != Field::complex) {
    throw std::invalid_argument("verify_deterministic_bound: complex variant on real tensor");
  }

  VerificationReport report;
  report.k = k;
  report.variant = variant;
  report.slack_sigmas = slack_sigmas;

  EstimatorConfig cfg = estimator;
  cfg.symmetric = symmetric;
  cfg.seed = substream(seed, 0x657374ULL);
  report.estimate = multi_restart(t, cfg).value;

  report.moment = moment_estimate(t, k, n, substream(seed, 0x6d6f6dULL),
                                  symmetric, threads);
  report.prefactor_log_used =
      prefactor_log(variant, t.shape(), k) + prefactor_log_offset;

  const double inf = std::numeric_limits<double>::infinity();
  report.lhs_log = report.estimate > 0.0
                       ? 2.0 * static_cast<double>(k) * std::log(report.estimate)
                       : -inf;
  const double slackened =
      report.moment.mean + slack_sigmas * report.moment.stderr_of_mean;
  report.rhs_log = slackened > 0.0 ? report.prefactor_log_used + std::log(slackened)
                                   : -inf;
  report.pass = report.lhs_log <= report.rhs_log;
  return report;
}

SweepSummary expectation_sweep(const ModelSpec& spec,
                               const EstimatorConfig& estimator,
                               long long realizations, SeedSpec seed,
                               int threads) {
  if (realizations < 1) {
    throw std::invalid_argument("expectation_sweep: realizations must be >= 1");
  }
  validate(spec);

  SweepSummary summary;
  summary.values.assign(static_cast<std::size_t>(realizations), 0.0);
  summary.dispersion.assign(static_cast<std::size_t>(realizations), 0.0);
  parallel_for(static_cast<std::size_t>(realizations), threads, [&](std::size_t r) {
    const DenseTensor t = sample_tensor(spec, substream(seed, 2 * r));
    EstimatorConfig cfg = estimator;
    cfg.seed = substream(seed, 2 * r + 1);
    const EstimateResult res = multi_restart(t, cfg);
    summary.values[r] = res.value;
    const auto [lo, hi] =
        std::minmax_element(res.restart_values.begin(), res.restart_values.end());
    summary.dispersion[r] = *hi - *lo;
  });
  mean_and_stderr(summary.values, summary.mean, summary.stderr_of_mean);
  return summary;
}

}  // namespace injnorm
