#pragma once

#include <cstdint>
#include <string_view>

namespace qnc {

// Counter-based generators keep sampling reproducible across platforms;
// std::uniform_real_distribution is implementation-defined, so uniforms
// are built from raw 64-bit draws instead.

struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline uint64_t hash_mix(uint64_t a, uint64_t b) {
  SplitMix64 g(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
  return g.next();
}

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Per-state stream seed: stable under appending more states to a config.
inline uint64_t derive_seed(uint64_t master, std::string_view state_id) {
  return hash_mix(master, fnv1a(state_id));
}

} // namespace qnc
