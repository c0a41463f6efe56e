#ifndef INJNORM_MONTECARLO_HPP
#define INJNORM_MONTECARLO_HPP

#include <cstddef>

#include "injnorm/bounds.hpp"
#include "injnorm/ensembles.hpp"
#include "injnorm/optimize.hpp"
#include "injnorm/rng.hpp"
#include "injnorm/tensor.hpp"

namespace injnorm {

struct MomentEstimate {
  long long k = 1;
  long long samples = 0;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  SeedSpec seed;
};

/// Mean and standard error of |<T, u_1 (x) ... (x) u_p>|^{2k} over n
/// independent tuples of uniform sphere vectors (one replicated vector when
/// symmetric). Sample i always draws from substream(seed, i), so the result
/// is byte-identical for any thread count.
MomentEstimate moment_estimate(const DenseTensor& t, long long k, long long n,
                               SeedSpec seed, bool symmetric = false,
                               int threads = 1);

struct VerificationReport {
  long long k = 1;
  PrefactorKind variant = PrefactorKind::real_asym;
  double estimate = 0.0;  // multi-restart lower bound on the injective norm
  MomentEstimate moment;
  double prefactor_log_used = 0.0;
  double lhs_log = 0.0;  // 2k ln(estimate)
  double rhs_log = 0.0;  // prefactor_log + ln(mean + slack * stderr)
  double slack_sigmas = 0.0;
  bool pass = false;
};

/// Monte-Carlo check of the deterministic moment inequality
/// estimate^{2k} <= prefactor * (mean + slack * stderr). The estimate is a
/// true lower bound on the injective norm, so failures beyond MC noise mean
/// an implementation bug. `prefactor_log_offset` shifts the prefactor in
/// log space (the corrupted-prefactor negative control passes -ln 2).
VerificationReport verify_deterministic_bound(
    const DenseTensor& t, PrefactorKind variant, long long k, long long n,
    double slack_sigmas, SeedSpec seed, const EstimatorConfig& estimator,
    int threads = 1, double prefactor_log_offset = 0.0);

struct SweepSummary {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::vector<double> values;      // per-realization best estimates
  std::vector<double> dispersion;  // per-realization max - min over restarts
};

/// Averages multi_restart estimates over freshly sampled tensors; tensor r
/// and its estimator both derive their streams from substream(seed, r).
SweepSummary expectation_sweep(const ModelSpec& spec,
                               const EstimatorConfig& estimator,
                               long long realizations, SeedSpec seed,
                               int threads = 1);

}  // namespace injnorm

#endif  // INJNORM_MONTECARLO_HPP
