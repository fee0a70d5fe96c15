#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sgep {

/// Seedable generator with a platform-independent stream.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniforms take the top 53 bits. Normals use the Box-Muller
/// transform, z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = ... sin(2 pi u2), with
/// u1 in (0, 1]; z1 is cached and returned by the next call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = 0;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sgep
