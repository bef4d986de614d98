#pragma once

// Seeded randomness with a pinned, language-portable definition.
//
// Generator: MT19937-64 (std::mt19937_64, default seeding from a single
// 64-bit value). Uniform doubles are (next() >> 11) * 2^-53, i.e. 53-bit
// fractions in [0, 1). Derived streams use derive_seed(), the SplitMix64
// finalizer applied to seed + stream * 0x9E3779B97F4A7C15.

#include <cstdint>
#include <random>

namespace rplan {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rplan
