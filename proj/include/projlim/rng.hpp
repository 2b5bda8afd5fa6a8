#pragma once

#include <cstdint>
#include <random>

namespace projlim {

// splitmix64, the usual seed expander. Used both to whiten user seeds and as
// the documented splitting rule for deriving per-task seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Splitting rule: stream s of base seed b is seeded with splitmix64(b + s + 1).
// Parallel sub-tasks must use disjoint stream ids; merging order is fixed by
// the caller, so results do not depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + stream + 1);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

}  // namespace projlim
