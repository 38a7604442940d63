#pragma once

#include <cstdint>
#include <random>

namespace roughlab {

/// Seeded uniform stream with a portable bit-to-double map.
///
/// std::mt19937_64 output is fixed by the standard; the standard distributions are not,
/// so doubles are built from the top 53 bits directly.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    __extension__ using wide = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<wide>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace roughlab
