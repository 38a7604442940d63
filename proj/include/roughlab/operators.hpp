#pragma once

#include <span>
#include <vector>

#include "roughlab/grid.hpp"
#include "roughlab/sphere.hpp"

namespace roughlab {

enum class ApplyMethod { direct, fft };

/// Largest points-per-axis accepted by ApplyMethod::direct.
constexpr int kDirectMaxPoints = 32;

/// Lattice realization of phi -> sum_{0<|y|<R} Omega(y/|y|) |y|^{alpha-n} phi(x-y) h^n.
///
/// Offsets m in [-N/2, N/2)^n are stored at flat index (m mod N). Omega is sampled
/// at lattice directions and, by default, its mean over each shell {|m|^2 = const}
/// is subtracted, so the discrete kernel sums to zero and annihilates constants.
class RoughOperator {
 public:
  RoughOperator(Grid grid, SphereKernel kernel, double alpha, bool shell_projection = true);

  const Grid& grid() const noexcept { return grid_; }
  const SphereKernel& kernel() const noexcept { return kernel_; }
  double alpha() const noexcept { return alpha_; }
  double inner_radius() const noexcept { return grid_.spacing(); }
  double outer_radius() const noexcept { return 0.5 * grid_.box_length(); }

  /// Kernel samples (without the cell volume) in wrapped offset layout.
  const Field& tabulated() const noexcept { return tabulated_; }
  /// forward(tabulated): convolution by this symbol reproduces the direct sum.
  const Spectrum& symbol() const noexcept { return symbol_; }
  /// Kernel samples placed at their physical offsets (origin at index N/2), for inspection.
  Field centered_kernel() const;

  struct Shell {
    long lattice_norm2 = 0;
    int count = 0;
    /// Sum of sampled Omega over the shell before and after projection.
    double raw_sum = 0.0;
    double projected_sum = 0.0;
  };
  const std::vector<Shell>& shells() const noexcept { return shells_; }

 private:
  Grid grid_;
  SphereKernel kernel_;
  double alpha_;
  Field tabulated_;
  Spectrum symbol_;
  std::vector<Shell> shells_;
};

Field apply_rough(const RoughOperator& op, const Field& field, ApplyMethod method = ApplyMethod::fft);
Spectrum apply_rough(const RoughOperator& op, const Spectrum& field_spectrum);

/// Convolution restricted to offsets with |y| >= t (t = h keeps every nonzero offset).
Field apply_truncated(const RoughOperator& op, const Field& field, double t);

/// h 2^k for k = 0, 1, ... up to `max_radius` (default L/2).
std::vector<double> dyadic_radii(const Grid& grid, double max_radius = 0.0);

/// max over radii (in list order) of |apply_truncated|.
Field maximal_truncation(const RoughOperator& op, const Field& field, std::span<const double> radii);

/// Max over the listed ball radii (|m| h <= r, torus offsets) of the average of |field|,
/// and |field| itself.
Field hardy_littlewood(const Field& field, std::span<const double> radii);
/// Dyadic radii up to the torus diameter sqrt(n) L / 2.
std::vector<double> maximal_function_radii(const Grid& grid);

/// Riesz transform -i xi_j/|xi|; non-mean-zero input is projected with a warning.
Field riesz(const Field& field, int j);

}  // namespace roughlab
