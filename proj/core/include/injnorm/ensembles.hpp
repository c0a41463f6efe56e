#ifndef INJNORM_ENSEMBLES_HPP
#define INJNORM_ENSEMBLES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "injnorm/rng.hpp"
#include "injnorm/tensor.hpp"

namespace injnorm {

/// Entry laws, all with E|X|^2 = 1 at unit scale. Real kinds are symmetric
/// in law; complex kinds are circularly symmetric.
enum class DistKind { gaussian_real, gaussian_complex, rademacher, uniform_sym, steinhaus };

Field dist_field(DistKind kind);

struct EntryDistribution {
  DistKind kind = DistKind::gaussian_real;
  double scale = 1.0;  // standard deviation of |entry|
};

/// Draw one variate (real kinds return a zero-imaginary value).
Cplx sample_entry(const EntryDistribution& dist, CounterRng& rng);

enum class ModelFamily { a, s, s_tilde, b };

/// Ensemble descriptor for the four random-tensor models.
///  - family a: rectangular allowed, either field; i.i.d. entries with
///    variance 1/(prod dims)^{1/p}.
///  - family s: complex cubic; independent-up-to-symmetry entries, one draw
///    per sorted multi-index scaled by sqrt(|Stab|/p!), gamma variance 1/d.
///  - family s_tilde: complex cubic; symmetric-subspace projection of a
///    family-a draw.
///  - family b: complex cubic, rank >= 1; sum of rank rank-one products of
///    independent vectors with entry variance 1/d.
struct ModelSpec {
  ModelFamily family = ModelFamily::a;
  Field field = Field::real;
  std::vector<std::size_t> dims;
  std::size_t rank = 0;  // family b only
  EntryDistribution dist;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const ModelSpec& spec);

DenseTensor sample_model_a(const ModelSpec& spec, SeedSpec seed);
DenseTensor sample_model_s(const ModelSpec& spec, SeedSpec seed);
DenseTensor sample_model_s_tilde(const ModelSpec& spec, SeedSpec seed);

struct BoundedRankSample {
  DenseTensor tensor;
  std::vector<FactorTuple> components;  // rank entries, each with p factors
};
BoundedRankSample sample_model_b(const ModelSpec& spec, SeedSpec seed);

/// Dispatches on spec.family.
DenseTensor sample_tensor(const ModelSpec& spec, SeedSpec seed);

/// Uniform on the real (d-1)-sphere or the complex unit sphere of C^d:
/// a standard Gaussian vector of the matching symmetry class, normalized.
std::vector<Cplx> sample_uniform_sphere(std::size_t d, Field field, CounterRng& rng);

FactorTuple sample_unit_factor_tuple(std::span<const std::size_t> dims,
                                     Field field, CounterRng& rng);

std::string to_string(ModelFamily family);
std::string to_string(DistKind kind);

}  // namespace injnorm

#endif  // INJNORM_ENSEMBLES_HPP
