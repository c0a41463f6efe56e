#include "injnorm/rng.hpp"

#include <cmath>

namespace injnorm {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SeedSpec substream(SeedSpec parent, std::uint64_t index) {
  return SeedSpec{parent.master_seed,
                  mix64(parent.stream_id ^ mix64(index + 1))};
}

CounterRng::CounterRng(SeedSpec seed)
    : key_(mix64(mix64(seed.master_seed) ^ mix64(seed.stream_id ^ kGamma))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + kGamma * ++counter_); }

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_unit() - 1.0;
    v = 2.0 * next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::complex<double> CounterRng::next_complex_gaussian() {
  const double re = next_gaussian();
  const double im = next_gaussian();
  return {re * 0.7071067811865476, im * 0.7071067811865476};
}

}  // namespace injnorm
