#include "cylev/rng.hpp"

#include <cmath>
#include <numbers>

namespace cylev {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id)
    : key_(mix64(mix64(seed) ^ (mix64(stream_id ^ 0x5851f42d4c957f2dULL) | 1ULL))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + counter_++ * kGolden); }

double CounterRng::uniform() {
  // 53-bit mantissa, shifted into the open interval.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::gaussian() {
  if (has_cached_gauss_) {
    has_cached_gauss_ = false;
    return cached_gauss_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_gauss_ = r * std::sin(theta);
  has_cached_gauss_ = true;
  return r * std::cos(theta);
}

double CounterRng::exponential(double rate) { return -std::log(uniform()) / rate; }

std::uint64_t CounterRng::uniform_index(std::uint64_t n) {
  // Rejection-free modulo is fine here: n is tiny relative to 2^64.
  return next_u64() % n;
}

std::uint64_t Substream::id(std::uint64_t path_index, std::uint64_t component) {
  return path_index * (kMaxDrivers + 16) + component;
}

}  // namespace cylev
