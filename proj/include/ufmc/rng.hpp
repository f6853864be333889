// Deterministic random number generation. Every stochastic op in the library
// takes an explicit seed; per-trial seeds are derived from a root seed with a
// counter scheme so that runs are reproducible bit for bit and trials stay
// independent of thread scheduling.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "ufmc/types.hpp"

namespace ufmc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for (root, stream, index). Streams separate uses (channel taps, data
/// symbols, noise); the index is the trial or symbol counter.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(root ^ (0xa076'1d64'78bd'642fULL * (stream + 1))) + index);
}

/// mt19937_64 is fully specified by the standard, and the Gaussian draw below
/// avoids std::normal_distribution (whose output is implementation defined),
/// so identical seeds give identical streams on any conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on (0, 1].
  double uniform_pos() {
    const std::uint64_t bits = eng_() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() {
    const std::uint64_t bits = eng_() >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = var (polar form).
  Complex cgauss(double var) {
    const double amp = std::sqrt(-var * std::log(uniform_pos()));
    const double phase = 2.0 * std::numbers::pi * uniform();
    return Complex(amp * std::cos(phase), amp * std::sin(phase));
  }

  /// Real Gaussian, mean 0, variance var.
  double gauss(double var) {
    const double amp = std::sqrt(-2.0 * var * std::log(uniform_pos()));
    return amp * std::cos(2.0 * std::numbers::pi * uniform());
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return eng_() % n;  // grids here are tiny; modulo bias is irrelevant
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ufmc
