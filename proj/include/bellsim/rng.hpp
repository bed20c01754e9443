#pragma once

#include <cstdint>

namespace bellsim {

// SplitMix64: 64-bit state, one additive step plus a three-round finalizer
// per output (Vigna's splitmix64.c). Chosen for bit-reproducible results
// across platforms; the whole generator is these few lines, pinned by the
// golden file under tests/golden/.
//
// Stream derivation rule: the generator for (seed, stream_id) starts from
// state mix(seed ^ mix(stream_id)). Shards and sub-experiments derive their
// streams through this rule and nothing else.
class SplitMix64 {
public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Stateless finalizer; identical to one next() call starting from state x.
  static constexpr std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_id) {
    return SplitMix64(mix(seed ^ mix(stream_id)));
  }

private:
  std::uint64_t state_;
};

}  // namespace bellsim
