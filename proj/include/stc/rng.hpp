#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace stc {

/// Deterministic RNG: mt19937_64 (sequence pinned by the standard) with an
/// explicit bits-to-double mapping, so identical seeds reproduce identical
/// streams regardless of standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Independent stream derived from (seed, stream id); gives each run and
  /// each sampling task its own reproducible stream.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 of the pair; avoids correlated mt19937 seedings.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  bool coin() { return (gen_() & 1ull) != 0; }

  /// Standard normal via Box-Muller (cached spare).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform point in the n-ball of given radius: normalized Gaussian
  /// direction scaled by radius * u^(1/n).
  void in_ball(double radius, std::span<double> out) {
    double norm2 = 0.0;
    for (auto& c : out) {
      c = normal();
      norm2 += c * c;
    }
    double norm = std::sqrt(norm2);
    if (norm == 0.0) {
      for (auto& c : out) c = 0.0;
      return;
    }
    double n = static_cast<double>(out.size());
    double scale = radius * std::pow(uniform01(), 1.0 / n) / norm;
    for (auto& c : out) c *= scale;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stc
