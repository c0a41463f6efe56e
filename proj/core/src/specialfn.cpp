#include "injnorm/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace injnorm {

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive");
  }
  // lgamma_r avoids the global signgam that plain lgamma writes.
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_double_factorial_odd(long long k) {
  if (k < 0) {
    throw std::domain_error("log_double_factorial_odd: k must be >= 0");
  }
  if (k == 0) return 0.0;
  const double kk = static_cast<double>(k);
  return log_gamma(2.0 * kk + 1.0) - kk * std::log(2.0) - log_gamma(kk + 1.0);
}

double log_binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("log_binomial: require 0 <= k <= n");
  }
  if (k == 0 || k == n) return 0.0;
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return log_gamma(nn + 1.0) - log_gamma(kk + 1.0) - log_gamma(nn - kk + 1.0);
}

namespace {

const double kBranchPoint = -std::exp(-1.0);

double halley_refine(double w, double x) {
  // Halley steps on f(w) = w e^w - x; quadratic residual shrink per step.
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0));
    if (denom == 0.0) break;
    const double step = f / denom;
    const double next = w - step;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(next))) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

double initial_guess_principal(double x) {
  if (x < -0.25) {
    // series around the branch point, q = sqrt(2(1+ex))
    const double q = std::sqrt(std::max(0.0, 2.0 * (1.0 + std::exp(1.0) * x)));
    return -1.0 + q - q * q / 3.0 + 11.0 * q * q * q / 72.0;
  }
  if (x < 1.0) {
    // Taylor series at 0: x - x^2 + 3/2 x^3
    return x * (1.0 - x * (1.0 - 1.5 * x));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

double initial_guess_lower(double x) {
  if (x < -0.27) {
    const double q = std::sqrt(std::max(0.0, 2.0 * (1.0 + std::exp(1.0) * x)));
    return -1.0 - q - q * q / 3.0 - 11.0 * q * q * q / 72.0;
  }
  // near 0^-: w ~ ln(-x) - ln(-ln(-x))
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w(LambertBranch branch, double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("lambert_w: argument must be finite");
  }
  if (branch == LambertBranch::principal) {
    if (x < kBranchPoint) {
      throw std::domain_error("lambert_w: principal branch requires x >= -1/e");
    }
    if (x == 0.0) return 0.0;
    if (x <= kBranchPoint) return -1.0;
    return halley_refine(initial_guess_principal(x), x);
  }
  if (!(x >= kBranchPoint) || !(x < 0.0)) {
    throw std::domain_error("lambert_w: lower branch requires -1/e <= x < 0");
  }
  if (x <= kBranchPoint) return -1.0;
  double w = halley_refine(initial_guess_lower(x), x);
  return std::min(w, -1.0);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("log_sum_exp: empty list");
  }
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;  // all -inf, or a stray inf/nan propagates
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - m);
  return m + std::log(acc);
}

}  // namespace injnorm
