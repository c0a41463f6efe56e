#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "injnorm/ensembles.hpp"
#include "injnorm/tensor.hpp"

using namespace injnorm;

namespace {

DenseTensor random_tensor(Field field, std::vector<std::size_t> shape,
                          std::uint64_t seed) {
  DenseTensor t(field, std::move(shape));
  CounterRng rng(SeedSpec{seed, 0});
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = field == Field::real ? Cplx{rng.next_gaussian(), 0.0}
                                : rng.next_complex_gaussian();
  }
  return t;
}

// Reference symmetrizer: explicit sum over all p! permutations.
DenseTensor symmetrize_brute(const DenseTensor& t) {
  const std::size_t p = t.order();
  DenseTensor out(t.field(), t.shape());
  std::vector<std::size_t> axes(p);
  std::iota(axes.begin(), axes.end(), 0);
  std::vector<std::size_t> idx(p), src(p);
  std::size_t count = 0;
  do {
    ++count;
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      out.multi_index(flat, idx);
      for (std::size_t i = 0; i < p; ++i) src[i] = idx[axes[i]];
      out[flat] += t[t.flat_index(src)];
    }
  } while (std::next_permutation(axes.begin(), axes.end()));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out[flat] /= static_cast<double>(count);
  }
  return out;
}

FactorTuple basis_tuple(const DenseTensor& t, std::span<const std::size_t> which) {
  FactorTuple x{t.field(), {}};
  for (std::size_t i = 0; i < t.order(); ++i) {
    std::vector<Cplx> e(t.shape()[i], Cplx{0.0, 0.0});
    e[which[i]] = Cplx{1.0, 0.0};
    x.factors.push_back(std::move(e));
  }
  return x;
}

}  // namespace

TEST_CASE("rank_one_overlap basis pairings") {
  DenseTensor t(Field::complex, {2, 3, 2});
  const std::size_t first[3] = {0, 0, 0};
  t[t.flat_index(first)] = Cplx{1.0, 0.0};
  CHECK(rank_one_overlap(t, basis_tuple(t, first)) == Cplx{1.0, 0.0});

  // random entry is recovered conjugated
  DenseTensor r = random_tensor(Field::complex, {2, 2}, 5);
  const std::size_t pick[2] = {0, 1};
  const Cplx got = rank_one_overlap(r, basis_tuple(r, pick));
  CHECK(std::abs(got - std::conj(r[r.flat_index(pick)])) < 1e-15);
}

TEST_CASE("p=1 overlap is the two-norm at the maximizer") {
  DenseTensor t = random_tensor(Field::real, {7}, 9);
  const double n = frobenius_norm(t);
  FactorTuple x{Field::real, {std::vector<Cplx>(7)}};
  for (std::size_t i = 0; i < 7; ++i) x.factors[0][i] = t[i] / n;
  CHECK(std::abs(rank_one_overlap(t, x)) == doctest::Approx(n).epsilon(1e-12));
}

TEST_CASE("partial contraction is consistent with the overlap at every slot") {
  for (Field field : {Field::real, Field::complex}) {
    DenseTensor t = random_tensor(field, {2, 3, 2}, 17);
    CounterRng rng(SeedSpec{99, 0});
    FactorTuple x = sample_unit_factor_tuple(t.shape(), field, rng);
    const Cplx direct = rank_one_overlap(t, x);
    for (std::size_t slot = 0; slot < 3; ++slot) {
      const auto w = partial_contraction(t, x, slot);
      Cplx paired{0.0, 0.0};
      for (std::size_t j = 0; j < w.size(); ++j) paired += w[j] * x.factors[slot][j];
      CHECK(std::abs(paired - direct) < 1e-12);
    }
  }
}

TEST_CASE("partial contraction p=2 with a basis vector slices a column") {
  DenseTensor t = random_tensor(Field::complex, {3, 3}, 31);
  FactorTuple x{Field::complex, {std::vector<Cplx>(3), std::vector<Cplx>(3)}};
  x.factors[1][2] = Cplx{1.0, 0.0};  // e_3 in the second slot
  const auto w = partial_contraction(t, x, 0);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t idx[2] = {i, 2};
    CHECK(std::abs(w[i] - std::conj(t[t.flat_index(idx)])) < 1e-15);
  }
}

TEST_CASE("frobenius norm") {
  DenseTensor zero(Field::real, {3, 3});
  CHECK(frobenius_norm(zero) == 0.0);
  DenseTensor unit(Field::complex, {2, 2, 2});
  unit[0] = Cplx{1.0, 0.0};
  CHECK(frobenius_norm(unit) == 1.0);

  // Steinhaus model-a draws have a deterministic Frobenius norm
  ModelSpec spec{ModelFamily::a, Field::complex, {2, 3, 4}, 0,
                 {DistKind::steinhaus, 1.0}};
  const DenseTensor t = sample_model_a(spec, SeedSpec{11, 0});
  const double expected = std::pow(24.0, (1.0 - 1.0 / 3.0) / 2.0);
  CHECK(frobenius_norm(t) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("unit-factor overlap obeys Cauchy-Schwarz") {
  DenseTensor t = random_tensor(Field::complex, {3, 3, 3}, 23);
  CounterRng rng(SeedSpec{1, 2});
  for (int rep = 0; rep < 20; ++rep) {
    FactorTuple x = sample_unit_factor_tuple(t.shape(), Field::complex, rng);
    CHECK(std::abs(rank_one_overlap(t, x)) <= frobenius_norm(t) + 1e-12);
  }
}

TEST_CASE("symmetrize agrees with the explicit permutation sum") {
  for (std::size_t p : {2u, 3u, 4u}) {
    for (std::size_t d : {2u, 3u}) {
      DenseTensor t =
          random_tensor(Field::complex, std::vector<std::size_t>(p, d), 7 * p + d);
      const DenseTensor fast = symmetrize(t);
      const DenseTensor brute = symmetrize_brute(t);
      for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(std::abs(fast[i] - brute[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("symmetrize is an idempotent nonexpansive projector") {
  DenseTensor t = random_tensor(Field::complex, {3, 3, 3}, 41);
  const DenseTensor s = symmetrize(t);
  const DenseTensor ss = symmetrize(s);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - ss[i]) < 1e-12);
  CHECK(frobenius_norm(s) <= frobenius_norm(t) + 1e-12);
  CHECK(is_symmetric(s, 1e-12));
  CHECK_THROWS_AS(symmetrize(DenseTensor(Field::real, {2, 3})), std::invalid_argument);
}

TEST_CASE("is_symmetric flags the asymmetric basis tensor") {
  DenseTensor t(Field::real, {2, 2});
  const std::size_t idx[2] = {0, 1};
  t[t.flat_index(idx)] = Cplx{1.0, 0.0};
  CHECK_FALSE(is_symmetric(t, 1e-12));
  const std::size_t other[2] = {1, 0};
  t[t.flat_index(other)] = Cplx{1.0, 0.0};
  CHECK(is_symmetric(t, 1e-12));
}

TEST_CASE("text serialization round-trips") {
  for (Field field : {Field::real, Field::complex}) {
    DenseTensor t = random_tensor(field, {2, 3}, 77);
    std::stringstream buf;
    save_tensor(t, buf);
    const DenseTensor back = load_tensor(buf);
    REQUIRE(back.shape() == t.shape());
    CHECK(back.field() == t.field());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);
  }
  std::stringstream bad("real 1");
  CHECK_THROWS(load_tensor(bad));
}

TEST_CASE("capacity limit is enforced") {
  CHECK_THROWS_AS(DenseTensor(Field::real, {DenseTensor::kMaxEntries + 1}),
                  std::length_error);
  CHECK_THROWS_AS(DenseTensor(Field::real, {1u << 15, 1u << 15}), std::length_error);
}

TEST_CASE("shape mismatches are rejected") {
  DenseTensor t = random_tensor(Field::real, {2, 2}, 3);
  FactorTuple wrong_len{Field::real, {std::vector<Cplx>(2)}};
  CHECK_THROWS_AS(rank_one_overlap(t, wrong_len), std::invalid_argument);
  FactorTuple wrong_field{Field::complex,
                          {std::vector<Cplx>(2), std::vector<Cplx>(2)}};
  CHECK_THROWS_AS(rank_one_overlap(t, wrong_field), std::invalid_argument);
  FactorTuple ok{Field::real, {std::vector<Cplx>(2), std::vector<Cplx>(2)}};
  CHECK_THROWS_AS(partial_contraction(t, ok, 2), std::invalid_argument);
}
