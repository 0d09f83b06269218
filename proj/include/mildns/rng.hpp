#pragma once

// Deterministic seeding: one master seed per run; every randomized check
// derives its own stream from the master seed and its name, so adding or
// reordering checks never shifts another check's draws.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace mildns {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

struct RngStream {
  std::uint64_t state = 0;

  explicit RngStream(std::uint64_t seed) : state(seed) {}
  RngStream(std::uint64_t master, std::string_view name) : state(master ^ fnv1a64(name)) {}

  std::uint64_t next_u64() { return splitmix64(state); }

  double uniform() {  // in [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [lo, hi] inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  double normal() {  // Box-Muller, one value per call
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

}  // namespace mildns
