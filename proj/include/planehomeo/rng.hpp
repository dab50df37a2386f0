#pragma once

#include <cstdint>
#include <random>

namespace planehomeo {

// Deterministic uniform sampling with a fixed bits-to-double convention, so
// generated instances are identical across platforms and standard libraries.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  // Uniform point in the unit disk by rejection from the square.
  std::pair<double, double> in_unit_disk() {
    for (;;) {
      const double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return {x, y};
    }
  }
};

}  // namespace planehomeo
