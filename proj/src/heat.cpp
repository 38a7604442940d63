#include "roughlab/heat.hpp"

#include <cmath>
#include <string>

#include "roughlab/error.hpp"
#include "roughlab/field_ops.hpp"
#include "roughlab/spectral.hpp"

namespace roughlab {

void require_heat_resolved(const Grid& grid, double t) {
  if (!(t > 0.0)) throw DomainError("heat time must be positive");
  if (std::sqrt(2.0 * t) < 2.0 * grid.spacing() * (1.0 - 1e-12))
    throw ResolutionError("heat kernel under-resolved at t = " + std::to_string(t) +
                          ": standard deviation below two grid spacings");
}

Field heat_convolve_unchecked(const Field& field, double t) {
  return inverse(apply(forward(field), multipliers::heat(t)));
}

Field heat_convolve(const Field& field, double t) {
  require_heat_resolved(field.grid(), t);
  return heat_convolve_unchecked(field, t);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw DomainError("slope fit needs at least two matching samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

HeatGradientTable heat_gradient_norm_table(const Grid& grid, double r, std::span<const double> times) {
  if (!(r >= 1.0)) throw DomainError("heat table exponent must be >= 1");
  HeatGradientTable table;
  table.r = r;
  table.expected_slope = -(1.0 + grid.dim() * (1.0 - 1.0 / r)) / 2.0;
  Field delta(grid);
  Index o{grid.origin_index(), grid.origin_index(), grid.origin_index()};
  delta[grid.ravel(o)] = 1.0 / grid.cell_volume();
  const Spectrum ds = forward(delta);
  std::vector<double> lx, ly;
  for (double t : times) {
    require_heat_resolved(grid, t);
    const Spectrum gs = apply(ds, multipliers::heat(t));
    Field mag(grid);
    for (int d = 0; d < grid.dim(); ++d) {
      const Field gd = inverse(apply(gs, multipliers::derivative(d)));
      for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += gd[i] * gd[i];
    }
    for (double& v : mag.values()) v = std::sqrt(v);
    const double norm = lebesgue_norm(mag, r);
    table.times.push_back(t);
    table.norms.push_back(norm);
    lx.push_back(std::log(t));
    ly.push_back(std::log(norm));
  }
  if (times.size() >= 2) table.slope = least_squares_slope(lx, ly);
  return table;
}

}  // namespace roughlab
