/*
 * Deterministic random stream for the engine.
 *
 * Every draw the engine makes goes through this wrapper, and every draw rule
 * is fully specified here, so a trace is reproducible bit for bit from
 * (config, seed) on any platform:
 *
 *   engine          std::mt19937_64 seeded directly with the run seed
 *   next_double     (next_u64() >> 11) * 2^-53, uniform on [0, 1)
 *   uniform_below   unbiased rejection: draw x = next_u64() until
 *                   x >= (2^64 - n) % n, return x % n; no draw when n == 1
 *   uniform_int     lo + uniform_below(hi - lo + 1)
 *
 * std::uniform_int_distribution and friends are implementation-defined and
 * are never used.
 */
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace hivabm {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, n). Consumes no draw when n == 1.
  std::uint32_t uniform_below(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    if (n == 1) return 0;
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return static_cast<std::uint32_t>(x % bound);
    }
  }

  // Uniform on the inclusive range [lo, hi].
  int uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    return lo + static_cast<int>(
                    uniform_below(static_cast<std::uint32_t>(hi - lo + 1)));
  }

  // Uniform on [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hivabm
