#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace qtm {

using RandomEngine = std::mt19937_64;

/// SplitMix64 step; cheap mixer for deriving independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic sub-stream seed for (base seed, salt). Used for per-chain and
/// per-sweep engines so that results do not depend on thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t s = base ^ (salt * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  splitmix64(s);
  return splitmix64(s);
}

inline double uniform01(RandomEngine& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Uniform point in the closed ball of given radius (rejection from the cube).
inline std::array<double, 3> uniform_in_ball(RandomEngine& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const double x = u(rng), y = u(rng), z = u(rng);
    if (x * x + y * y + z * z <= 1.0) return {radius * x, radius * y, radius * z};
  }
}

}  // namespace qtm
