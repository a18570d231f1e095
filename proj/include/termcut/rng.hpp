#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace termcut {

// All randomness in the library is derived from explicit 64-bit seeds so that
// every run is reproducible across platforms. std::mt19937_64 is fully
// specified by the standard; the distributions in <random> are not, so we
// only ever draw raw 64-bit words and do rejection sampling ourselves.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// FNV-1a. Used to fold vertex ids into per-vertex seeds; std::hash<string>
// is not stable across implementations.
inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t derive_seed(uint64_t base, const std::string& tag) {
  return splitmix64(base ^ splitmix64(fnv1a64(tag)));
}

inline uint64_t derive_seed(uint64_t base, uint64_t salt) {
  return splitmix64(base ^ splitmix64(salt));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n) without modulo bias.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform in [lo, hi], inclusive.
  uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return engine_() & 1; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace termcut
