#pragma once

#include <cstddef>
#include <cstdint>

namespace kaczmarz {

/// Counter-based 64-bit generator.
///
/// Output n is the SplitMix64 finalizer applied to `key + n * 0x9E3779B97F4A7C15`,
/// where the key is derived from (seed, stream id). The sequence depends only on
/// integer arithmetic, so it is identical on every platform and easy to
/// reproduce in other languages.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on {0, ..., bound-1}; rejection sampling removes modulo bias.
  /// bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Standard normal via the Marsaglia polar method.
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

// Stream ids keep the index draws, instance sampling and residual sampling of a
// given seed independent of each other.
inline constexpr std::uint64_t kIndexStreamId = 0;
inline constexpr std::uint64_t kGeneratorStreamId = 1;
inline constexpr std::uint64_t kRowSampleStreamId = 2;

/// Row-index source shared by every randomized solver.
class IndexStream {
 public:
  explicit IndexStream(std::uint64_t seed) noexcept : seed_(seed), rng_(seed, kIndexStreamId) {}

  std::size_t next(std::size_t m) noexcept {
    return static_cast<std::size_t>(rng_.uniform_index(static_cast<std::uint64_t>(m)));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  /// Number of 64-bit draws consumed so far.
  std::uint64_t consumed() const noexcept { return rng_.counter(); }

 private:
  std::uint64_t seed_;
  CounterRng rng_;
};

}  // namespace kaczmarz
