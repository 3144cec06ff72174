#pragma once

#include <cstdint>
#include <random>

namespace spinlab {

/// Counter-based splittable seeding. Every stream is a pure function of
/// (root seed, path of counters), so parallel workers stay reproducible
/// regardless of scheduling.
class SeedTree {
 public:
  explicit SeedTree(std::uint64_t seed) : state_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  SeedTree child(std::uint64_t counter) const {
    SeedTree t(0);
    t.state_ = mix(state_ ^ mix(counter + 0x9e3779b97f4a7c15ULL));
    return t;
  }

  std::uint64_t value() const { return state_; }
  std::mt19937_64 engine() const { return std::mt19937_64(state_); }

  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform integer in [lo, hi]. Portable rejection draw: the output of
/// std::uniform_int_distribution differs between standard libraries.
inline long uniform_int(std::mt19937_64& rng, long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = (~0ULL) - ((~0ULL) % span);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<long>(x % span);
}

inline bool coin(std::mt19937_64& rng, double p_true = 0.5) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p_true;
}

}  // namespace spinlab
