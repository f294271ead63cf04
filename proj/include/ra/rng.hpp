#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ra {

// All randomness in a run flows from one master seed through named
// sub-streams (reset, exploration, replay, init, ...).  A stream is an
// mt19937_64 seeded from the master seed and a hash of the stream name,
// so adding draws to one stream never perturbs another.
class Rng {
 public:
  Rng() : engine_(0) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t master_seed, std::string_view name);

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1).  Explicit construction (53-bit mantissa)
  // instead of std::uniform_real_distribution keeps draws identical
  // across standard-library implementations.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ra
