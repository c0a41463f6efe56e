#ifndef INJNORM_RNG_HPP
#define INJNORM_RNG_HPP

#include <complex>
#include <cstdint>

namespace injnorm {

/// Identifies one reproducible random stream. Distinct (master_seed,
/// stream_id) pairs give statistically independent streams, so parallel
/// tasks can each own a derived stream without sharing state.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// Derives a child stream for task `index` (restart, realization, sample...).
SeedSpec substream(SeedSpec parent, std::uint64_t index);

/// Counter-based generator: the n-th output is a fixed mix of
/// (master_seed, stream_id, n). No large state, cheap to fork by stream_id.
class CounterRng {
 public:
  explicit CounterRng(SeedSpec seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();
  /// Standard normal via the polar (Marsaglia) method; caches the pair's
  /// second variate.
  double next_gaussian();
  /// Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> next_complex_gaussian();

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace injnorm

#endif  // INJNORM_RNG_HPP
