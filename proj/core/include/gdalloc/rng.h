// Named random streams derived from a single root seed.

#ifndef GDALLOC_RNG_H_
#define GDALLOC_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace gdalloc {

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; stable across platforms unlike std::hash.
inline uint64_t HashName(std::string_view name) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed for stream `name` with integer coordinates, e.g.
// StreamSeed(root, "sequence", {instance, episode}). Streams with different
// names or coordinates are unrelated, so adding a stream never perturbs
// another.
inline uint64_t StreamSeed(uint64_t root, std::string_view name,
                           std::initializer_list<uint64_t> coords = {}) {
  uint64_t s = SplitMix64(root ^ HashName(name));
  for (uint64_t c : coords) s = SplitMix64(s ^ SplitMix64(c + 1));
  return s;
}

}  // namespace gdalloc

#endif  // GDALLOC_RNG_H_
