#pragma once

// Counter-based random streams (Philox4x32-10). A stream is identified by
// a 64-bit seed (the Philox key) and a 64-bit stream id; draws walk a
// 64-bit counter. Sub-streams are derived deterministically, so results
// do not depend on how work is split across threads.

#include <array>
#include <cstdint>
#include <string_view>

namespace csma {

inline constexpr std::string_view kRngAlgorithm = "philox4x32-10";

/// One Philox4x32 block with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finaliser; used to derive stream ids and seeds from keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Independent child stream; same (parent, id) always gives the same child.
  Rng substream(std::uint64_t id) const noexcept { return Rng(seed_, mix64(stream_ ^ mix64(id + 1))); }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, bound) without modulo bias. bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // UniformRandomBitGenerator interface
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int available_ = 0;  // 64-bit words left in block_
};

}  // namespace csma
