#pragma once

#include <cstdint>
#include <random>

namespace shred {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Module tags keep streams of different subsystems apart even for equal
/// (seed, trial) pairs.
enum class StreamTag : std::uint64_t {
  kWalk = 1,
  kPairs = 2,
  kCenters = 3,
  kExplore = 4,
  kStable = 5,
  kBadword = 6,
  kOracle = 7,
};

/// Seed of the stream owned by `trial` of a run seeded with `seed`:
/// mix64(mix64(mix64(seed) ^ trial) ^ tag).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial,
                                    StreamTag tag) {
  return mix64(mix64(mix64(seed) ^ trial) ^ static_cast<std::uint64_t>(tag));
}

/// Deterministic 64-bit generator. Floating draws are built from raw bits so
/// they do not depend on the standard library's distribution internals.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t trial, StreamTag tag)
      : engine_(derive_seed(seed, trial, tag)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (unbiased).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace shred
