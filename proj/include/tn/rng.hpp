#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace tn {

/// Deterministic random source: mt19937_64 with an explicit 53-bit mapping to
/// doubles, so the stream is identical across platforms and standard library
/// implementations for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), n >= 1. Rejection-free modulo is fine here:
  /// n is always tiny compared to 2^64, the bias is far below any tolerance
  /// in use, and determinism is what matters.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
  }

  std::vector<double> vector(std::size_t dim, double lo, double hi) {
    std::vector<double> v(dim);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  /// Integer-valued vector with entries in [lo, hi]; exact in doubles.
  std::vector<double> integer_vector(std::size_t dim, int lo, int hi) {
    std::vector<double> v(dim);
    for (auto& x : v)
      x = static_cast<double>(lo) + static_cast<double>(index(static_cast<std::size_t>(hi - lo + 1)));
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tn
