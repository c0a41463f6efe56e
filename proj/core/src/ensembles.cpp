#include "injnorm/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "injnorm/specialfn.hpp"

namespace injnorm {

Field dist_field(DistKind kind) {
  switch (kind) {
    case DistKind::gaussian_real:
    case DistKind::rademacher:
    case DistKind::uniform_sym:
      return Field::real;
    case DistKind::gaussian_complex:
    case DistKind::steinhaus:
      return Field::complex;
  }
  throw std::invalid_argument("dist_field: unknown kind");
}

Cplx sample_entry(const EntryDistribution& dist, CounterRng& rng) {
  switch (dist.kind) {
    case DistKind::gaussian_real:
      return {dist.scale * rng.next_gaussian(), 0.0};
    case DistKind::gaussian_complex:
      return dist.scale * rng.next_complex_gaussian();
    case DistKind::rademacher:
      return {(rng.next_u64() & 1u) ? dist.scale : -dist.scale, 0.0};
    case DistKind::uniform_sym: {
      const double u = 2.0 * rng.next_unit() - 1.0;
      return {dist.scale * std::numbers::sqrt3 * u, 0.0};
    }
    case DistKind::steinhaus: {
      const double theta = 2.0 * std::numbers::pi * rng.next_unit();
      return {dist.scale * std::cos(theta), dist.scale * std::sin(theta)};
    }
  }
  throw std::invalid_argument("sample_entry: unknown kind");
}

void validate(const ModelSpec& spec) {
  if (spec.dims.empty()) throw std::invalid_argument("ModelSpec: dims empty");
  for (std::size_t d : spec.dims) {
    if (d == 0) throw std::invalid_argument("ModelSpec: zero dimension");
  }
  if (dist_field(spec.dist.kind) != spec.field) {
    throw std::invalid_argument("ModelSpec: entry distribution field mismatch");
  }
  if (spec.dist.scale != 1.0) {
    throw std::invalid_argument(
        "ModelSpec: entry distribution must be unit-scale; the model fixes the variance");
  }
  const bool cubic = std::all_of(spec.dims.begin(), spec.dims.end(),
                                 [&](std::size_t d) { return d == spec.dims.front(); });
  switch (spec.family) {
    case ModelFamily::a:
      break;
    case ModelFamily::s:
    case ModelFamily::s_tilde:
      if (spec.field != Field::complex || !cubic) {
        throw std::invalid_argument("ModelSpec: families s/s~ require complex cubic dims");
      }
      break;
    case ModelFamily::b:
      if (spec.field != Field::complex || !cubic) {
        throw std::invalid_argument("ModelSpec: family b requires complex cubic dims");
      }
      if (spec.rank == 0) throw std::invalid_argument("ModelSpec: family b requires rank >= 1");
      break;
  }
}

DenseTensor sample_model_a(const ModelSpec& spec, SeedSpec seed) {
  validate(spec);
  if (spec.family != ModelFamily::a) {
    throw std::invalid_argument("sample_model_a: wrong family");
  }
  double log_prod = 0.0;
  for (std::size_t d : spec.dims) log_prod += std::log(static_cast<double>(d));
  const double scale =
      std::exp(-log_prod / (2.0 * static_cast<double>(spec.dims.size())));

  DenseTensor t(spec.field, spec.dims);
  CounterRng rng(seed);
  EntryDistribution dist{spec.dist.kind, scale};
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = sample_entry(dist, rng);
  return t;
}

namespace {

bool next_sorted_index(std::vector<std::size_t>& idx, std::size_t d) {
  std::size_t pos = idx.size();
  while (pos-- > 0) {
    if (idx[pos] + 1 < d) {
      const std::size_t v = idx[pos] + 1;
      for (std::size_t i = pos; i < idx.size(); ++i) idx[i] = v;
      return true;
    }
    if (pos == 0) break;
  }
  return false;
}

// sqrt(m_1! ... m_k! / p!) for the multiplicities of a sorted multi-index.
double stabilizer_scale(const std::vector<std::size_t>& sorted_idx) {
  const std::size_t p = sorted_idx.size();
  double log_num = 0.0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= p; ++i) {
    if (i < p && sorted_idx[i] == sorted_idx[i - 1]) {
      ++run;
    } else {
      log_num += log_gamma(static_cast<double>(run) + 1.0);
      run = 1;
    }
  }
  return std::exp(0.5 * (log_num - log_gamma(static_cast<double>(p) + 1.0)));
}

}  // namespace

DenseTensor sample_model_s(const ModelSpec& spec, SeedSpec seed) {
  validate(spec);
  if (spec.family != ModelFamily::s) {
    throw std::invalid_argument("sample_model_s: wrong family");
  }
  const std::size_t d = spec.dims.front();
  const std::size_t p = spec.dims.size();
  DenseTensor t(Field::complex, spec.dims);
  CounterRng rng(seed);
  EntryDistribution gamma{spec.dist.kind, 1.0 / std::sqrt(static_cast<double>(d))};

  std::vector<std::size_t> idx(p, 0);
  std::vector<std::size_t> perm(p);
  do {
    const Cplx value = stabilizer_scale(idx) * sample_entry(gamma, rng);
    perm = idx;
    do {
      t[t.flat_index(perm)] = value;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_sorted_index(idx, d));
  return t;
}

DenseTensor sample_model_s_tilde(const ModelSpec& spec, SeedSpec seed) {
  validate(spec);
  if (spec.family != ModelFamily::s_tilde) {
    throw std::invalid_argument("sample_model_s_tilde: wrong family");
  }
  ModelSpec companion = spec;
  companion.family = ModelFamily::a;
  return symmetrize(sample_model_a(companion, seed));
}

BoundedRankSample sample_model_b(const ModelSpec& spec, SeedSpec seed) {
  validate(spec);
  if (spec.family != ModelFamily::b) {
    throw std::invalid_argument("sample_model_b: wrong family");
  }
  const std::size_t d = spec.dims.front();
  const std::size_t p = spec.dims.size();
  CounterRng rng(seed);
  EntryDistribution dist{spec.dist.kind, 1.0 / std::sqrt(static_cast<double>(d))};

  BoundedRankSample out{DenseTensor(Field::complex, spec.dims), {}};
  out.components.reserve(spec.rank);
  std::vector<Cplx> acc, next;
  for (std::size_t r = 0; r < spec.rank; ++r) {
    FactorTuple comp{Field::complex, {}};
    comp.factors.resize(p);
    for (std::size_t c = 0; c < p; ++c) {
      comp.factors[c].resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        comp.factors[c][j] = sample_entry(dist, rng);
      }
    }
    // progressive outer product x_1 (x) ... (x) x_p
    acc.assign(comp.factors[0].begin(), comp.factors[0].end());
    for (std::size_t c = 1; c < p; ++c) {
      next.assign(acc.size() * d, Cplx{0.0, 0.0});
      for (std::size_t a = 0; a < acc.size(); ++a) {
        for (std::size_t j = 0; j < d; ++j) next[a * d + j] = acc[a] * comp.factors[c][j];
      }
      acc.swap(next);
    }
    for (std::size_t i = 0; i < out.tensor.size(); ++i) out.tensor[i] += acc[i];
    out.components.push_back(std::move(comp));
  }
  return out;
}

DenseTensor sample_tensor(const ModelSpec& spec, SeedSpec seed) {
  switch (spec.family) {
    case ModelFamily::a:
      return sample_model_a(spec, seed);
    case ModelFamily::s:
      return sample_model_s(spec, seed);
    case ModelFamily::s_tilde:
      return sample_model_s_tilde(spec, seed);
    case ModelFamily::b:
      return sample_model_b(spec, seed).tensor;
  }
  throw std::invalid_argument("sample_tensor: unknown family");
}

std::vector<Cplx> sample_uniform_sphere(std::size_t d, Field field, CounterRng& rng) {
  if (d == 0) throw std::invalid_argument("sample_uniform_sphere: d must be >= 1");
  std::vector<Cplx> v(d);
  do {
    for (std::size_t j = 0; j < d; ++j) {
      v[j] = (field == Field::real) ? Cplx{rng.next_gaussian(), 0.0}
                                    : rng.next_complex_gaussian();
    }
  } while (vector_norm(v) == 0.0);
  normalize(v);
  return v;
}

FactorTuple sample_unit_factor_tuple(std::span<const std::size_t> dims,
                                     Field field, CounterRng& rng) {
  FactorTuple x{field, {}};
  x.factors.reserve(dims.size());
  for (std::size_t d : dims) x.factors.push_back(sample_uniform_sphere(d, field, rng));
  return x;
}

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::a: return "a";
    case ModelFamily::s: return "s";
    case ModelFamily::s_tilde: return "s-tilde";
    case ModelFamily::b: return "b";
  }
  return "?";
}

std::string to_string(DistKind kind) {
  switch (kind) {
    case DistKind::gaussian_real: return "gaussian-real";
    case DistKind::gaussian_complex: return "gaussian-complex";
    case DistKind::rademacher: return "rademacher";
    case DistKind::uniform_sym: return "uniform";
    case DistKind::steinhaus: return "steinhaus";
  }
  return "?";
}

}  // namespace injnorm
