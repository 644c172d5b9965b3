#include "mcarma/rng.hpp"

#include <cmath>

#include "mcarma/errors.hpp"

namespace mcarma {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate,
                          std::uint64_t stream) {
  std::uint64_t k = splitmix64(seed + kGolden);
  k = splitmix64(k ^ (replicate + kGolden));
  k = splitmix64(k ^ (stream + kGolden));
  return k;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(derive_seed(seed, 0, stream)) {}

std::uint64_t CounterRng::next_u64() {
  counter_ += 1;
  return splitmix64(key_ + counter_ * kGolden);
}

double CounterRng::next_uniform() {
  // 53 random bits mapped to (0, 1]
  const std::uint64_t bits = next_u64() >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1p-53;
}

double CounterRng::next_gauss() {
  if (has_cached_gauss_) {
    has_cached_gauss_ = false;
    return cached_gauss_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 6.283185307179586476925286766559 * u2;
  cached_gauss_ = rad * std::sin(ang);
  has_cached_gauss_ = true;
  return rad * std::cos(ang);
}

double CounterRng::next_inverse_gaussian(double mean, double shape) {
  if (!(mean > 0.0) || !(shape > 0.0))
    throw InvalidInputError("inverse-Gaussian parameters must be positive");
  const double nu = next_gauss();
  const double y = nu * nu;
  const double x = mean + mean * mean * y / (2.0 * shape) -
                   (mean / (2.0 * shape)) *
                       std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  const double u = next_uniform();
  if (u <= mean / (mean + x)) return x;
  return mean * mean / x;
}

} // namespace mcarma
