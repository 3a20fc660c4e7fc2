#pragma once

#include <cstdint>
#include <random>

namespace mahnn {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent per-purpose seeds from one
// base seed so adding a consumer never shifts another's stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <class T>
inline T uniform(Rng& rng, T lo, T hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return static_cast<T>(dist(rng));
}

}  // namespace mahnn
