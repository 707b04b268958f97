#pragma once

#include <cstdint>
#include <random>

namespace mhls {

/// Mixes a master seed with a stream index (splitmix64 finalizer), so each
/// trial of an ensemble owns an independent, reproducible stream.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// mt19937_64 with hand-written conversions. The standard distributions are
/// implementation-defined, which would break bit-for-bit reproducibility
/// across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], unbiased by rejection.
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

  /// Standard normal via Box-Muller (one value per call, the sine branch discarded).
  double normal();

  std::uint64_t bits() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace mhls
