#include <doctest.h>

#include <cmath>
#include <numbers>

#include "injnorm/ensembles.hpp"
#include "injnorm/optimize.hpp"

using namespace injnorm;

TEST_CASE("model a: steinhaus entries have exact modulus") {
  ModelSpec spec{ModelFamily::a, Field::complex, {2, 3, 4}, 0,
                 {DistKind::steinhaus, 1.0}};
  const DenseTensor t = sample_model_a(spec, SeedSpec{1, 0});
  const double expected = std::pow(24.0, -1.0 / 6.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(t[i]) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("model a: rademacher entries sit at +-1/sqrt(2) for 2x2") {
  ModelSpec spec{ModelFamily::a, Field::real, {2, 2}, 0, {DistKind::rademacher, 1.0}};
  const DenseTensor t = sample_model_a(spec, SeedSpec{2, 0});
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(std::abs(t[i].real()) - 1.0 / std::numbers::sqrt2) < 1e-15);
    CHECK(t[i].imag() == 0.0);
  }
}

TEST_CASE("model a: gaussian entry variance is 1/(prod dims)^(1/p)") {
  ModelSpec spec{ModelFamily::a, Field::real, {4, 4, 4}, 0,
                 {DistKind::gaussian_real, 1.0}};
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const DenseTensor t = sample_model_a(spec, SeedSpec{3, static_cast<std::uint64_t>(i)});
    const double v = t[0].real();
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  // var(X^2)/n with X ~ N(0, 1/4): sd of the variance estimate = sqrt(2/n)/4
  const double sigma = std::sqrt(2.0 / n) / 4.0;
  CHECK(std::abs(var - 0.25) < 3.0 * sigma);
}

TEST_CASE("model s: stabilizer scaling is exact for steinhaus gamma") {
  ModelSpec spec{ModelFamily::s, Field::complex, {3, 3, 3}, 0,
                 {DistKind::steinhaus, 1.0}};
  const DenseTensor t = sample_model_s(spec, SeedSpec{4, 0});
  const double inv_sqrt_d = 1.0 / std::sqrt(3.0);
  const auto modulus_at = [&](std::initializer_list<std::size_t> idx) {
    std::vector<std::size_t> v(idx);
    return std::abs(t[t.flat_index(v)]);
  };
  // |gamma| = 1/sqrt(d) exactly; the index-class scale multiplies it
  CHECK(modulus_at({0, 0, 0}) == doctest::Approx(inv_sqrt_d).epsilon(1e-12));
  CHECK(modulus_at({0, 0, 1}) ==
        doctest::Approx(std::sqrt(1.0 / 3.0) * inv_sqrt_d).epsilon(1e-12));
  CHECK(modulus_at({0, 1, 2}) ==
        doctest::Approx(std::sqrt(1.0 / 6.0) * inv_sqrt_d).epsilon(1e-12));
  CHECK(is_symmetric(t, 0.0));  // constructionally exact
}

TEST_CASE("model s-tilde equals the projected companion draw") {
  ModelSpec spec{ModelFamily::s_tilde, Field::complex, {3, 3, 3}, 0,
                 {DistKind::steinhaus, 1.0}};
  const DenseTensor t = sample_model_s_tilde(spec, SeedSpec{5, 0});
  CHECK(is_symmetric(t, 1e-12));

  ModelSpec companion = spec;
  companion.family = ModelFamily::a;
  const DenseTensor proj = symmetrize(sample_model_a(companion, SeedSpec{5, 0}));
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(t[i] - proj[i]) < 1e-15);
}

TEST_CASE("model s and s-tilde gaussian second moments agree") {
  const std::size_t d = 2, p = 3;
  const int n = 20000;
  double m_s = 0.0, m_st = 0.0, sq_s = 0.0, sq_st = 0.0;
  ModelSpec s_spec{ModelFamily::s, Field::complex, {d, d, d}, 0,
                   {DistKind::gaussian_complex, 1.0}};
  ModelSpec st_spec = s_spec;
  st_spec.family = ModelFamily::s_tilde;
  std::vector<std::size_t> idx{0, 0, 1};
  for (int i = 0; i < n; ++i) {
    const auto ts = sample_model_s(s_spec, SeedSpec{6, static_cast<std::uint64_t>(i)});
    const auto tt = sample_model_s_tilde(st_spec, SeedSpec{7, static_cast<std::uint64_t>(i)});
    const double vs = std::norm(ts[ts.flat_index(idx)]);
    const double vt = std::norm(tt[tt.flat_index(idx)]);
    m_s += vs;
    m_st += vt;
    sq_s += vs * vs;
    sq_st += vt * vt;
  }
  m_s /= n;
  m_st /= n;
  const double se =
      std::sqrt((sq_s / n - m_s * m_s) / n) + std::sqrt((sq_st / n - m_st * m_st) / n);
  CHECK(std::abs(m_s - m_st) < 3.0 * se);
}

TEST_CASE("model b: entry variance is rank/d^p") {
  const std::size_t d = 2, p = 3, rank = 2;
  ModelSpec spec{ModelFamily::b, Field::complex, {d, d, d}, rank,
                 {DistKind::gaussian_complex, 1.0}};
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_model_b(spec, SeedSpec{8, static_cast<std::uint64_t>(i)});
    const double v = std::norm(s.tensor[0]);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double target = static_cast<double>(rank) / std::pow(d, p);
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - target) < 3.0 * se);
}

TEST_CASE("model b: rank-one injective norm is the product of factor norms") {
  ModelSpec spec{ModelFamily::b, Field::complex, {4, 4, 4}, 1,
                 {DistKind::gaussian_complex, 1.0}};
  const auto s = sample_model_b(spec, SeedSpec{9, 0});
  double prod = 1.0;
  for (const auto& f : s.components[0].factors) prod *= vector_norm(f);

  EstimatorConfig cfg;
  cfg.restarts = 4;
  cfg.seed = SeedSpec{10, 0};
  CHECK(multi_restart(s.tensor, cfg).value == doctest::Approx(prod).epsilon(1e-9));
}

TEST_CASE("model b rejects rank 0; invalid specs are rejected") {
  ModelSpec spec{ModelFamily::b, Field::complex, {2, 2, 2}, 0,
                 {DistKind::gaussian_complex, 1.0}};
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  ModelSpec real_sym{ModelFamily::s, Field::real, {2, 2}, 0,
                     {DistKind::gaussian_real, 1.0}};
  CHECK_THROWS_AS(validate(real_sym), std::invalid_argument);
  ModelSpec mismatched{ModelFamily::a, Field::real, {2, 2}, 0,
                       {DistKind::steinhaus, 1.0}};
  CHECK_THROWS_AS(validate(mismatched), std::invalid_argument);
}

TEST_CASE("uniform sphere vectors") {
  CounterRng rng(SeedSpec{11, 0});
  for (int i = 0; i < 50; ++i) {
    const auto u = sample_uniform_sphere(5, Field::complex, rng);
    CHECK(vector_norm(u) == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int i = 0; i < 20; ++i) {
    const auto u = sample_uniform_sphere(1, Field::real, rng);
    CHECK(std::abs(std::abs(u[0].real()) - 1.0) < 1e-12);
  }
  // componentwise mean vanishes
  const int n = 100000;
  double mean = 0.0, mean2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto u = sample_uniform_sphere(3, Field::real, rng);
    mean += u[0].real();
    mean2 += u[0].real() * u[0].real();
  }
  mean /= n;
  CHECK(std::abs(mean) < 3.0 * std::sqrt(mean2 / n / n));
  CHECK_THROWS_AS(sample_uniform_sphere(0, Field::real, rng), std::invalid_argument);
}

TEST_CASE("rigid sub-Gaussianity spot checks at k=2") {
  const int n = 200000;
  for (DistKind kind : {DistKind::gaussian_real, DistKind::rademacher,
                        DistKind::uniform_sym}) {
    CounterRng rng(SeedSpec{12, static_cast<std::uint64_t>(kind)});
    EntryDistribution dist{kind, 1.0};
    double m4 = 0.0, m8 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_entry(dist, rng).real();
      const double x4 = x * x * x * x;
      m4 += x4;
      m8 += x4 * x4;
    }
    m4 /= n;
    const double se = std::sqrt((m8 / n - m4 * m4) / n);
    CHECK(m4 <= 3.0 + 5.0 * se);  // E[X^4] <= 3 (E[X^2])^2
  }
  for (DistKind kind : {DistKind::gaussian_complex, DistKind::steinhaus}) {
    CounterRng rng(SeedSpec{13, static_cast<std::uint64_t>(kind)});
    EntryDistribution dist{kind, 1.0};
    double m4 = 0.0, m8 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a2 = std::norm(sample_entry(dist, rng));
      m4 += a2 * a2;
      m8 += a2 * a2 * a2 * a2;
    }
    m4 /= n;
    const double se = std::sqrt((m8 / n - m4 * m4) / n);
    CHECK(m4 <= 2.0 + 5.0 * se);  // E|Y|^4 <= 2 (E|Y|^2)^2
  }
}

TEST_CASE("sampling is deterministic in (spec, seed)") {
  ModelSpec spec{ModelFamily::s, Field::complex, {3, 3, 3}, 0,
                 {DistKind::gaussian_complex, 1.0}};
  const DenseTensor a = sample_tensor(spec, SeedSpec{14, 3});
  const DenseTensor b = sample_tensor(spec, SeedSpec{14, 3});
  const DenseTensor c = sample_tensor(spec, SeedSpec{14, 4});
  bool identical = true, distinct = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && a[i] == b[i];
    distinct = distinct || a[i] != c[i];
  }
  CHECK(identical);
  CHECK(distinct);
}
