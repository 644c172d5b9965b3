#pragma once

#include <cstdint>

namespace mcarma {

/// Counter-based pseudo random generator (splitmix64 finalizer over a
/// keyed counter). Draws depend only on (key, counter), so streams keyed
/// by (seed, replicate, stream id) are reproducible independently of
/// scheduling order or thread count.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform draw on (0, 1] (never exactly 0, so log() is safe).
  double next_uniform();

  /// Standard normal via Box-Muller; caches the paired deviate.
  double next_gauss();

  /// Inverse-Gaussian draw with the given mean and shape parameter,
  /// Michael-Schucany-Haas transformation (exact, rejection free).
  double next_inverse_gaussian(double mean, double shape);

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_gauss_ = 0.0;
  bool has_cached_gauss_ = false;
};

/// Mix (seed, replicate, stream) into a single stream key.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate,
                          std::uint64_t stream);

} // namespace mcarma
