#pragma once

#include <span>
#include <vector>

#include "roughlab/grid.hpp"

namespace roughlab {

/// g_t * field through the multiplier e^{-t|xi|^2}.
///
/// Throws ResolutionError when sqrt(2t) < 2h: below that the Gaussian spans too few cells.
Field heat_convolve(const Field& field, double t);
/// Same multiplier without the resolution guard (internal quadrature nodes).
Field heat_convolve_unchecked(const Field& field, double t);
void require_heat_resolved(const Grid& grid, double t);

struct HeatGradientTable {
  double r = 2.0;
  std::vector<double> times;
  std::vector<double> norms;
  /// Least-squares slope of log(norm) against log(t).
  double slope = 0.0;
  /// -(1 + n(1 - 1/r))/2.
  double expected_slope = 0.0;
};

/// ||grad g_t||_{L^r} for each t, computed from the discrete heat kernel on `grid`.
HeatGradientTable heat_gradient_norm_table(const Grid& grid, double r, std::span<const double> times);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace roughlab
