#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace wrt {

/// SplitMix64 finalizer. Used to derive per-replicate substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of replicate `replicate` within a run seeded by `seed`. Independent of
/// the order in which replicates are executed.
constexpr std::uint64_t substreamSeed(std::uint64_t seed, std::uint64_t replicate) noexcept {
  return seed ^ splitmix64(replicate);
}

/// Deterministic 64-bit random stream. Satisfies UniformRandomBitGenerator so
/// it can drive the standard distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniformOpenClosed() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wrt
