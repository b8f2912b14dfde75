#pragma once

#include <cstdint>

namespace pge {

// Perturbation stream "splitmix64-fold-v1" (recorded in output metadata):
//   key(e)      = splitmix64(seed)
//   key((h,w))  = splitmix64(key(w) ^ GOLDEN * (h + 1))
//   offset      = alpha * (2u - 1),  u = (key >> 11) / 2^53  in [0,1)
// The key is a pure function of (seed, path), so node values never depend on
// evaluation order.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t stream_root(uint64_t seed) { return splitmix64(seed); }

inline uint64_t stream_step(uint64_t key, int letter) {
  return splitmix64(key ^
                    (0x9E3779B97F4A7C15ULL * (static_cast<uint64_t>(letter) + 1)));
}

inline double unit_from_key(uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

inline double symmetric_from_key(uint64_t key, double amplitude) {
  return amplitude * (2.0 * unit_from_key(key) - 1.0);
}

inline constexpr const char* kPerturbationStream = "splitmix64-fold-v1";

// FNV-1a, used for content hashes of run records.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xCBF29CE484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace pge
