#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rumor {

/// Default master seed used whenever the caller does not pass one.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED'2024'0000'0001ULL;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Folds a list of identifiers into a seed. Order matters, and distinct
/// tuples map to unrelated keys, so (seed, trial, round, node) triples give
/// independent substreams no matter how work is scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t h = splitmix64(seed ^ 0x243F6A8885A308D3ULL);
  for (std::uint64_t id : ids) h = splitmix64(h ^ splitmix64(id + 0x13198A2E03707344ULL));
  return h;
}

/// Counter-based generator: output i is a hash of (key, i). Cheap to create,
/// so every (trial, round, node, role) gets its own stream.
///
/// Satisfies UniformRandomBitGenerator.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    return splitmix64(key_ + 0xD1B54A32D192ED03ULL * (++counter_));
  }

  /// Uniform on (0, 1].
  double uniform_open0() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1p-53; }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

  /// Uniform integer in [0, bound), bound > 0. Lemire's method, unbiased.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform() < p;
  }

  /// Number of independent Bernoulli(p) trials up to and including the first
  /// success, by inversion. Returns `cap` when the value would exceed it.
  std::uint64_t geometric(double p, std::uint64_t cap) noexcept {
    if (p >= 1.0) return 1 < cap ? 1 : cap;
    if (p <= 0.0) return cap;
    const double g = std::floor(std::log(uniform_open0()) / std::log1p(-p));
    if (!(g < static_cast<double>(cap))) return cap;
    const auto v = static_cast<std::uint64_t>(g) + 1;
    return v < cap ? v : cap;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rumor
