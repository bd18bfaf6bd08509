#pragma once

#include <cstdint>

namespace cocyclelab {

// Counter-based generator: stream identity is (seed, trial), so parallel
// trials draw independent, reproducible values in any execution order.
class TrialRng {
public:
  TrialRng(uint64_t seed, uint64_t trial) noexcept
      : state_(mix(seed ^ mix(trial + 0x9E3779B97F4A7C15ull))) {}

  uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // uniform in [0,1)
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_double();
  }

  // 1..n inclusive
  uint64_t next_index(uint64_t n) noexcept { return next_u64() % n + 1; }

  bool next_bool() noexcept { return (next_u64() & 1u) != 0; }

private:
  static uint64_t mix(uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }
  uint64_t state_;
};

} // namespace cocyclelab
