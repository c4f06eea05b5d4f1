#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace rlftn {

/// SplitMix64 finalizer.  Bijective on 64-bit words; mix64(0) == 0.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Substream derivation rule used everywhere a master seed is expanded:
/// derive_seed(seed, tag) = seed XOR mix64(tag).  Tag 0 is the identity, so a
/// degenerate split leaves the stream unchanged.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return seed ^ mix64(tag);
}

/// Fixed tags for the documented seed-splitting scheme (see docs/seeds.md).
namespace seed_tag {
inline constexpr std::uint64_t initial_state = 1;
inline constexpr std::uint64_t rsvd_stream = 2;
inline constexpr std::uint64_t bench_matrix = 3;
}  // namespace seed_tag

/// Counter-based generator: the k-th output is a pure function of (seed, k),
/// so streams can be replayed or split without shared state.  The word
/// sequence is the SplitMix64 stream for the given seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : key_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1].
  double uniform() noexcept { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; deterministic across platforms for a
  /// given seed, unlike std::normal_distribution.
  double normal() noexcept {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

  void fill_gaussian(double* dst, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) dst[i] = normal();
  }

  /// Standard complex normal: unit total variance, split over re/im.
  void fill_gaussian(std::complex<double>* dst, std::size_t n) noexcept {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t i = 0; i < n; ++i)
      dst[i] = std::complex<double>(normal() * inv_sqrt2, normal() * inv_sqrt2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace rlftn
