#include "roughlab/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "roughlab/error.hpp"

namespace roughlab {

double lebesgue_norm(const Field& field, double p) {
  if (!(p >= 1.0)) throw DomainError("Lebesgue exponent must be >= 1, got " + std::to_string(p));
  if (std::isinf(p)) return field.max_abs();
  const double scale = field.max_abs();
  if (scale == 0.0) return 0.0;
  // Factor out the max so large p neither overflows nor underflows.
  double sum = 0.0;
  for (double v : field.values()) sum += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(sum * field.grid().cell_volume(), 1.0 / p);
}

int power_of_two_exponent(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("dilation factor must be positive");
  int k = 0;
  const double m = std::frexp(lambda, &k);
  if (m != 0.5) throw DomainError("dilation factor must be a power of two, got " + std::to_string(lambda));
  return k - 1;
}

Field resample_dilate(const Field& field, double lambda, double amplitude_power) {
  power_of_two_exponent(lambda);
  const Grid target = field.grid().companion(lambda);
  Field out(target, std::vector<double>(field.values().begin(), field.values().end()));
  if (amplitude_power != 0.0) out *= std::pow(lambda, amplitude_power);
  return out;
}

Field resample_dilate(const Field& field, double lambda, double amplitude_power, const Grid& target,
                      double tolerance) {
  power_of_two_exponent(lambda);
  const Grid& src = field.grid();
  if (src.dim() != target.dim()) throw ConfigurationError("dilation target has a different dimension");
  const double ratio = lambda * target.spacing() / src.spacing();
  const double stride_d = std::round(ratio);
  if (stride_d < 1.0 || std::abs(ratio - stride_d) > 1e-12 * ratio)
    throw DomainError("dilated grid is not commensurate with the source grid");
  power_of_two_exponent(stride_d);
  const long stride = static_cast<long>(stride_d);
  const int n = src.dim();
  const long Ns = src.points();
  const double amp = std::pow(lambda, amplitude_power);

  // Source indices on each axis that some target point reads.
  const long lo = std::max(0L, Ns / 2 - (target.points() / 2) * stride);
  const long hi = std::min(Ns - 1, Ns / 2 + (target.points() - 1 - target.points() / 2) * stride);

  Field out(target);
  for (std::size_t t = 0; t < target.size(); ++t) {
    const Index it = target.unravel(t);
    Index is{0, 0, 0};
    bool inside = true;
    for (int d = 0; d < n; ++d) {
      // Both grids hold the origin at index N/2.
      const long s = Ns / 2 + (it[d] - target.origin_index()) * stride;
      if (s < 0 || s >= Ns) inside = false;
      is[d] = static_cast<int>(s);
    }
    if (inside) out[t] = amp * field[src.ravel(is)];
  }
  const double threshold = tolerance * field.max_abs();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Index is = src.unravel(i);
    bool covered = true;
    for (int d = 0; d < n; ++d) covered = covered && is[d] >= lo && is[d] <= hi;
    if (!covered && std::abs(field[i]) > threshold) throw DomainError("dilation escapes the box");
  }
  return out;
}

}  // namespace roughlab
