#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fracvar {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream seed for member `index` of an ensemble (tag separates sub-streams
/// inside one generator, e.g. the two-sided noise of the moving-average fBm).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t tag = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(tag)) + index);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

/// n i.i.d. centered Gaussian draws with standard deviation sd.
inline std::vector<double> gaussian_increments(std::uint64_t seed, std::size_t n,
                                               double sd) {
  std::mt19937_64 rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sd * normal(rng);
  return out;
}

inline std::vector<double> standard_gaussians(std::uint64_t seed, std::size_t n) {
  return gaussian_increments(seed, n, 1.0);
}

}  // namespace fracvar
