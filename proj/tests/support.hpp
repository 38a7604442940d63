#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "roughlab/grid.hpp"

namespace roughlab::testing {

/// Uniform doubles in [lo, hi) from a fixed-seed Mersenne twister.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

inline Field random_field(const Grid& g, std::uint64_t seed) {
  Uniform u(seed);
  Field f(g);
  for (double& v : f.values()) v = u(-1.0, 1.0);
  return f;
}

inline double norm2(const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }

inline Field gaussian(const Grid& g, double width, Point center = {0.0, 0.0, 0.0}) {
  return Field::sample(g, [&](const Point& x) {
    Point d{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    return std::exp(-norm2(d) / (width * width));
  });
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double l2_diff_rel(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace roughlab::testing
