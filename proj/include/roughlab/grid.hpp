#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace roughlab {

/// Point in R^n; components beyond the grid dimension stay zero.
using Point = std::array<double, 3>;
using Index = std::array<int, 3>;

/// Periodic box [-L/2, L/2)^n sampled at N points per axis.
///
/// Point i on an axis sits at -L/2 + i*h, so index N/2 is the origin.
/// Flat indices are row-major with axis 0 slowest.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double box_length);

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return points_; }
  double box_length() const noexcept { return box_length_; }
  double spacing() const noexcept { return box_length_ / points_; }
  double cell_volume() const noexcept;
  double volume() const noexcept;
  std::size_t size() const noexcept { return size_; }

  double coordinate(int i) const noexcept { return -0.5 * box_length_ + i * spacing(); }
  Point position(std::size_t flat) const noexcept;
  Index unravel(std::size_t flat) const noexcept;
  /// Wraps each component periodically before flattening.
  std::size_t ravel(Index idx) const noexcept;
  /// Representative of i in [-N/2, N/2).
  int signed_index(int i) const noexcept { return i < points_ / 2 ? i : i - points_; }
  int origin_index() const noexcept { return points_ / 2; }

  /// Half-complex layout of a real transform: the last axis keeps N/2+1 modes.
  int spectral_last() const noexcept { return points_ / 2 + 1; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }
  double fundamental() const noexcept;

  /// Same point count, box shrunk by lambda (spacing shrinks with it).
  Grid companion(double lambda) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  int points_;
  double box_length_;
  std::size_t size_;
  std::size_t spectral_size_;
};

/// Real samples on a grid (physical representation).
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    Field out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.position(i));
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& storage() noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double c) noexcept;

  double max_abs() const noexcept;
  double mean() const noexcept;
  double integral() const noexcept;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);
Field pointwise_product(const Field& a, const Field& b);

/// Half-complex Fourier coefficients of a real field (spectral representation).
///
/// Coefficient at xi approximates the continuum transform: sum_x f(x) e^{-i xi (x - x_0)} h^n
/// where x_0 is the first grid point.
class Spectrum {
 public:
  explicit Spectrum(Grid grid);
  Spectrum(Grid grid, std::vector<std::complex<double>> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
  std::complex<double>& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  std::complex<double> operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace roughlab
