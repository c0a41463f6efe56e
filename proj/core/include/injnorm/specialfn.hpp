#ifndef INJNORM_SPECIALFN_HPP
#define INJNORM_SPECIALFN_HPP

#include <span>

namespace injnorm {

/// Real branches of the Lambert W function (inverse of w -> w*exp(w)).
/// The principal branch is defined on [-1/e, inf), the lower branch on
/// [-1/e, 0) with values in (-inf, -1].
enum class LambertBranch { principal, lower };

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// ln((2k-1)!!) via the identity (2k-1)!! = (2k)! / (2^k k!); k = 0 gives 0.
double log_double_factorial_odd(long long k);

/// ln C(n, k) for 0 <= k <= n. Throws std::domain_error otherwise.
double log_binomial(long long n, long long k);

/// Solves w * exp(w) = x on the requested branch by Halley iteration.
/// Residual contract: |w*exp(w) - x| <= 1e-12 * max(1, |x|).
double lambert_w(LambertBranch branch, double x);

/// ln sum_i exp(v_i) with the max subtracted for overflow safety.
/// Throws std::invalid_argument on an empty list.
double log_sum_exp(std::span<const double> values);

}  // namespace injnorm

#endif  // INJNORM_SPECIALFN_HPP
