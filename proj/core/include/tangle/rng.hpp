#pragma once

#include <cstdint>
#include <random>

namespace tangle {

/// Deterministic RNG with a platform-independent uniform mapping
/// (std distributions are implementation-defined; this one is pinned).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t integer(std::uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tangle
