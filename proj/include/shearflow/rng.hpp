#pragma once

#include <cstdint>

namespace shearflow {

/// Counter-based generator: value(i) = splitmix64(seed + i).  Stateless per
/// draw, so presets are reproducible from (seed, index) alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const {
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// uniform in [-1, 1)
  double uniform(std::uint64_t counter) const {
    return 2.0 * ((bits(counter) >> 11) * 0x1.0p-53) - 1.0;
  }

  static const char* name() { return "splitmix64-counter"; }

 private:
  std::uint64_t seed_;
};

}  // namespace shearflow
