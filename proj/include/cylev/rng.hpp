#pragma once

#include <cstdint>

namespace cylev {

/// Counter-based random stream. The state is (key, counter); each draw
/// applies the splitmix64 finalizer to the running counter, so a stream is a
/// pure function of (seed, stream_id, draw index). Streams never share state,
/// which makes path-parallel sampling reproducible for any thread count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Standard normal via Box-Muller (pair-cached).
  double gaussian();

  /// Exponential with the given rate.
  double exponential(double rate);

  /// Integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_gauss_ = 0.0;
  bool has_cached_gauss_ = false;
};

/// Substream labels: a path's randomness is split into independent streams
/// keyed by (seed, path_index, component). Driver k of a series process uses
/// component k; auxiliary draws use the reserved labels below.
struct Substream {
  static constexpr std::uint64_t kMaxDrivers = 4096;
  static constexpr std::uint64_t kWiener = kMaxDrivers + 0;
  static constexpr std::uint64_t kJumps = kMaxDrivers + 1;
  static constexpr std::uint64_t kInitial = kMaxDrivers + 2;
  static constexpr std::uint64_t kAux = kMaxDrivers + 3;

  static std::uint64_t id(std::uint64_t path_index, std::uint64_t component);
};

}  // namespace cylev
