#ifndef INJNORM_OPTIMIZE_HPP
#define INJNORM_OPTIMIZE_HPP

#include <vector>

#include "injnorm/rng.hpp"
#include "injnorm/tensor.hpp"

namespace injnorm {

enum class EstimateMethod { als, pga };

struct EstimatorConfig {
  EstimateMethod method = EstimateMethod::als;
  long long max_iters = 500;  // sweeps (als) or iterations (pga)
  double rel_tol = 1e-10;
  long long restarts = 1;
  bool symmetric = false;  // single-vector variant for symmetric tensors
  // pga knobs
  double step_size = 0.1;
  double noise_initial = 0.05;
  double noise_decay = 0.97;
  SeedSpec seed;
};

/// Config with the documented pga defaults (max_iters 2000).
EstimatorConfig default_pga_config();

struct EstimateResult {
  double value = 0.0;  // |<T, factors>|, a certified lower bound on the norm
  FactorTuple factors;
  long long iterations_used = 0;
  bool converged = false;
  std::vector<double> restart_values;
  /// Objective after every slot update (als) or iteration (pga/symmetric).
  std::vector<double> objective_trace;
};

/// Alternating updates x_i <- conj(w_i)/||w_i||, each an exact maximization
/// over one slot, so the objective never decreases. Single start; use
/// multi_restart for several.
EstimateResult als_estimate(const DenseTensor& t, const EstimatorConfig& config);

/// Noisy projected gradient ascent on |<T, X>| over the product of unit
/// spheres; per slot, step along the phase-aligned gradient plus decaying
/// Gaussian noise, then renormalize. Returns the best iterate.
EstimateResult pga_estimate(const DenseTensor& t, const EstimatorConfig& config);

/// Single-vector variant for symmetric tensors (the norm is attained on a
/// symmetric rank-one by Banach's theorem). Power step x <- conj(w)/||w||
/// with a backtracking fallback so the reported trace is monotone.
EstimateResult symmetric_estimate(const DenseTensor& t, const EstimatorConfig& config);

/// Runs the configured method from `restarts` independent seeded starts and
/// returns the best result; restart_values holds each restart's value.
EstimateResult multi_restart(const DenseTensor& t, const EstimatorConfig& config);

/// p = 2 ground truth: top singular value via power iteration on the Gram
/// map, to 1e-10 relative.
double matrix_oracle(const DenseTensor& t);

}  // namespace injnorm

#endif  // INJNORM_OPTIMIZE_HPP
