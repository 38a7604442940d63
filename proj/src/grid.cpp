#include "roughlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "roughlab/error.hpp"

namespace roughlab {

Grid::Grid(int dim, int points_per_axis, double box_length)
    : dim_(dim), points_(points_per_axis), box_length_(box_length) {
  if (dim != 2 && dim != 3) throw ConfigurationError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw ConfigurationError("points per axis must be even and >= 8, got " + std::to_string(points_per_axis));
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw ConfigurationError("box length must be positive");
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(points_);
  spectral_size_ = size_ / static_cast<std::size_t>(points_) * static_cast<std::size_t>(spectral_last());
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double Grid::volume() const noexcept { return std::pow(box_length_, dim_); }

double Grid::fundamental() const noexcept { return 2.0 * std::numbers::pi / box_length_; }

Index Grid::unravel(std::size_t flat) const noexcept {
  Index idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(points_);
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::size_t Grid::ravel(Index idx) const noexcept {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) {
    int i = idx[d] % points_;
    if (i < 0) i += points_;
    flat = flat * static_cast<std::size_t>(points_) + static_cast<std::size_t>(i);
  }
  return flat;
}

Point Grid::position(std::size_t flat) const noexcept {
  const Index idx = unravel(flat);
  Point x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) x[d] = coordinate(idx[d]);
  return x;
}

Grid Grid::companion(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  return Grid(dim_, points_, box_length_ / lambda);
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ConfigurationError("field has " + std::to_string(values_.size()) + " values, grid needs " +
                             std::to_string(grid_.size()));
}

namespace {
void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ConfigurationError("fields live on different grids");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double c) noexcept {
  for (double& v : values_) v *= c;
  return *this;
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::mean() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double Field::integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

Field pointwise_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Spectrum::Spectrum(Grid grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

Spectrum::Spectrum(Grid grid, std::vector<std::complex<double>> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size())
    throw ConfigurationError("spectrum has " + std::to_string(coeffs_.size()) + " coefficients, grid needs " +
                             std::to_string(grid_.spectral_size()));
}

}  // namespace roughlab
