#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "injnorm/specialfn.hpp"

using namespace injnorm;

TEST_CASE("log_gamma matches exact values") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(0.5) ==
        doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-13));
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-3.5), std::domain_error);
}

TEST_CASE("log_double_factorial_odd") {
  CHECK(log_double_factorial_odd(0) == 0.0);
  CHECK(log_double_factorial_odd(3) == doctest::Approx(std::log(15.0)).epsilon(1e-13));
  // defining identity, exactly as computed
  const long long k = 50;
  CHECK(log_double_factorial_odd(k) ==
        log_gamma(2.0 * k + 1.0) - k * std::log(2.0) - log_gamma(k + 1.0));
  CHECK_THROWS_AS(log_double_factorial_odd(-1), std::domain_error);
}

TEST_CASE("log_binomial values and symmetry") {
  CHECK(log_binomial(5, 0) == 0.0);
  CHECK(log_binomial(5, 2) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
  CHECK(log_binomial(2, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (long long n : {7LL, 40LL, 333LL}) {
    for (long long k = 0; k <= n; k += 3) {
      CHECK(log_binomial(n, k) == doctest::Approx(log_binomial(n, n - k)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(log_binomial(4, 5), std::domain_error);
}

TEST_CASE("lambert_w residuals on both branches") {
  CHECK(lambert_w(LambertBranch::principal, 0.0) == 0.0);
  CHECK(lambert_w(LambertBranch::lower, -std::exp(-1.0)) == doctest::Approx(-1.0));
  CHECK(lambert_w(LambertBranch::principal, std::exp(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-13));

  const auto residual_ok = [](LambertBranch b, double x) {
    const double w = lambert_w(b, x);
    return std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, std::abs(x));
  };
  for (double x : {-0.367879, -0.3, -0.1, -1e-3, -1e-9, -1e-30}) {
    CHECK(residual_ok(LambertBranch::lower, x));
    CHECK(lambert_w(LambertBranch::lower, x) <= -1.0);
    CHECK(residual_ok(LambertBranch::principal, x));
  }
  for (double x : {1e-8, 0.2, 1.0, 10.0, 1e4, 1e12, 1e100}) {
    CHECK(residual_ok(LambertBranch::principal, x));
  }
  CHECK_THROWS_AS(lambert_w(LambertBranch::principal, -0.4), std::domain_error);
  CHECK_THROWS_AS(lambert_w(LambertBranch::lower, 0.0), std::domain_error);
  CHECK_THROWS_AS(lambert_w(LambertBranch::lower, 0.5), std::domain_error);
}

TEST_CASE("log_sum_exp basics and properties") {
  const std::vector<double> one{0.0};
  CHECK(log_sum_exp(one) == 0.0);
  const std::vector<double> two{std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(two) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  const std::vector<double> big{1000.0, 1000.0};
  CHECK(log_sum_exp(big) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-14));

  // permutation invariance and shift equivariance
  const std::vector<double> a{0.3, -2.0, 5.5, 1.1};
  const std::vector<double> a_perm{5.5, 0.3, 1.1, -2.0};
  CHECK(log_sum_exp(a) == doctest::Approx(log_sum_exp(a_perm)).epsilon(1e-12));
  std::vector<double> shifted = a;
  for (double& v : shifted) v += 123.25;
  CHECK(log_sum_exp(shifted) == doctest::Approx(log_sum_exp(a) + 123.25).epsilon(1e-12));

  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), std::invalid_argument);
}
