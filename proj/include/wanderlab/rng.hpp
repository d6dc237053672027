#pragma once

// Seeded uniform draws that do not depend on the standard library's
// distribution implementations, so sampled pairs match across platforms.

#include <cstdint>
#include <random>

namespace wanderlab {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double between(double a, double b) { return a + (b - a) * next(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace wanderlab
