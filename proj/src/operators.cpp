#include "roughlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "roughlab/error.hpp"
#include "roughlab/log.hpp"
#include "roughlab/spectral.hpp"

namespace roughlab {

namespace {

long lattice_norm2(const Grid& g, const Index& idx, Index& m) {
  long s = 0;
  for (int d = 0; d < g.dim(); ++d) {
    m[d] = g.signed_index(idx[d]);
    s += static_cast<long>(m[d]) * m[d];
  }
  return s;
}

// Offsets with |m| h >= t, as an integer bound on |m|^2.
long truncation_bound(const Grid& g, double t) {
  const double ratio = t / g.spacing();
  return static_cast<long>(std::ceil(ratio * ratio - 1e-9));
}

Field truncated_table(const RoughOperator& op, double t) {
  const Grid& g = op.grid();
  const long bound = truncation_bound(g, t);
  Field out = op.tabulated();
  Index m{0, 0, 0};
  for (std::size_t i = 0; i < g.size(); ++i)
    if (lattice_norm2(g, g.unravel(i), m) < bound) out[i] = 0.0;
  return out;
}

Field convolve(const Spectrum& kernel_symbol, const Field& field) {
  Spectrum s = forward(field);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= kernel_symbol[i];
  return inverse(s);
}

Field direct_sum(const Field& table, const Field& field) {
  const Grid& g = field.grid();
  const int n = g.dim(), N = g.points();
  const double vol = g.cell_volume();
  std::vector<Index> offsets;
  std::vector<double> weights;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (table[j] != 0.0) {
      offsets.push_back(g.unravel(j));
      weights.push_back(table[j]);
    }
  // wrap[i + N] = i mod N for i in [-N, 2N).
  std::vector<std::size_t> wrap(3 * static_cast<std::size_t>(N));
  for (int i = -N; i < 2 * N; ++i) wrap[i + N] = static_cast<std::size_t>((i % N + N) % N);
  const std::size_t s0 = n == 3 ? std::size_t(N) * N : N, s1 = n == 3 ? N : 1;
  Field out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index x = g.unravel(i);
    double sum = 0.0;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const Index& m = offsets[k];
      std::size_t y = wrap[x[0] - m[0] + N] * s0 + wrap[x[1] - m[1] + N] * s1;
      if (n == 3) y += wrap[x[2] - m[2] + N];
      sum += weights[k] * field[y];
    }
    out[i] = sum * vol;
  }
  return out;
}

void require_grid(const RoughOperator& op, const Grid& g) {
  if (!(op.grid() == g)) throw ConfigurationError("operator and field grids differ");
}

}  // namespace

RoughOperator::RoughOperator(Grid grid, SphereKernel kernel, double alpha, bool shell_projection)
    : grid_(grid), kernel_(std::move(kernel)), alpha_(alpha), tabulated_(grid), symbol_(grid) {
  const int n = grid.dim();
  if (kernel_.dim() != n) throw ConfigurationError("kernel dimension does not match grid");
  if (!(alpha >= 0.0 && alpha < n - 1.0))
    throw DomainError("alpha must lie in [0, n-1); the case n-1 <= alpha < n is not covered");

  const double h = grid.spacing();
  const long outer = static_cast<long>(grid.points() / 2) * (grid.points() / 2);
  std::map<long, Shell> shells;
  std::vector<double> omega(grid.size(), 0.0);
  std::vector<long> norm2(grid.size(), 0);
  Index m{0, 0, 0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const long s = lattice_norm2(grid, grid.unravel(i), m);
    norm2[i] = s;
    if (s == 0 || s >= outer) continue;
    const double r = std::sqrt(static_cast<double>(s));
    Point sigma{0.0, 0.0, 0.0};
    double axial = 0.0;
    for (int d = 0; d < n; ++d) {
      sigma[d] = m[d] / r;
      axial += m[d] * kernel_.axis()[d];
    }
    omega[i] = kernel_.evaluate(sigma, axial / r);
    Shell& sh = shells[s];
    sh.lattice_norm2 = s;
    sh.count += 1;
    sh.raw_sum += omega[i];
  }
  if (shell_projection) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto it = shells.find(norm2[i]);
      if (it != shells.end()) omega[i] -= it->second.raw_sum / it->second.count;
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto it = shells.find(norm2[i]);
    if (it == shells.end()) continue;
    it->second.projected_sum += omega[i];
    const double r = std::sqrt(static_cast<double>(norm2[i])) * h;
    tabulated_[i] = omega[i] * std::pow(r, alpha - n);
  }
  for (auto& [key, sh] : shells) shells_.push_back(sh);
  symbol_ = forward(tabulated_);
}

Field RoughOperator::centered_kernel() const {
  Field out(grid_);
  Index m{0, 0, 0};
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    lattice_norm2(grid_, grid_.unravel(i), m);
    Index c{0, 0, 0};
    for (int d = 0; d < grid_.dim(); ++d) c[d] = m[d] + grid_.origin_index();
    out[grid_.ravel(c)] = tabulated_[i];
  }
  return out;
}

Field apply_rough(const RoughOperator& op, const Field& field, ApplyMethod method) {
  require_grid(op, field.grid());
  if (method == ApplyMethod::direct) {
    if (field.grid().points() > kDirectMaxPoints)
      throw ConfigurationError("direct summation refused: " + std::to_string(field.grid().points()) +
                               " points per axis exceeds the cost guard of " + std::to_string(kDirectMaxPoints));
    return direct_sum(op.tabulated(), field);
  }
  return convolve(op.symbol(), field);
}

Spectrum apply_rough(const RoughOperator& op, const Spectrum& field_spectrum) {
  require_grid(op, field_spectrum.grid());
  Spectrum s = field_spectrum;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= op.symbol()[i];
  return s;
}

Field apply_truncated(const RoughOperator& op, const Field& field, double t) {
  require_grid(op, field.grid());
  const double h = op.grid().spacing();
  if (!(t >= h * (1.0 - 1e-12)) || !(t <= op.outer_radius() * (1.0 + 1e-12)))
    throw DomainError("truncation radius must satisfy h <= t <= L/2");
  return convolve(forward(truncated_table(op, t)), field);
}

std::vector<double> dyadic_radii(const Grid& grid, double max_radius) {
  if (max_radius <= 0.0) max_radius = 0.5 * grid.box_length();
  std::vector<double> out;
  for (double r = grid.spacing(); r <= max_radius * (1.0 + 1e-12); r *= 2.0) out.push_back(r);
  return out;
}

Field maximal_truncation(const RoughOperator& op, const Field& field, std::span<const double> radii) {
  require_grid(op, field.grid());
  if (radii.empty()) throw DomainError("maximal truncation needs at least one radius");
  const Spectrum fs = forward(field);
  Field out(field.grid());
  for (double t : radii) {
    const double h = op.grid().spacing();
    if (!(t >= h * (1.0 - 1e-12)) || !(t <= op.outer_radius() * (1.0 + 1e-12)))
      throw DomainError("truncation radius must satisfy h <= t <= L/2");
    const Spectrum ks = forward(truncated_table(op, t));
    Spectrum s = fs;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= ks[i];
    const Field v = inverse(s);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(v[i]));
  }
  return out;
}

std::vector<double> maximal_function_radii(const Grid& grid) {
  return dyadic_radii(grid, std::sqrt(static_cast<double>(grid.dim())) * 0.5 * grid.box_length());
}

Field hardy_littlewood(const Field& field, std::span<const double> radii) {
  const Grid& g = field.grid();
  Field mag(g);
  for (std::size_t i = 0; i < g.size(); ++i) mag[i] = std::abs(field[i]);
  Field out = mag;
  if (radii.empty()) return out;
  const Spectrum ms = forward(mag);
  const double h = g.spacing();
  Index m{0, 0, 0};
  for (double r : radii) {
    const double bound = (r / h) * (r / h) * (1.0 + 1e-12);
    Field ball(g);
    double count = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (static_cast<double>(lattice_norm2(g, g.unravel(i), m)) <= bound) {
        ball[i] = 1.0;
        count += 1.0;
      }
    }
    // forward() carries h^n, so the convolution below is a ball sum times h^n.
    const Spectrum bs = forward(ball);
    Spectrum s = ms;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= bs[i];
    const Field avg = inverse(s);
    const double norm = 1.0 / (count * g.cell_volume());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], avg[i] * norm);
  }
  return out;
}

Field riesz(const Field& field, int j) {
  if (j < 0 || j >= field.grid().dim()) throw ConfigurationError("Riesz component out of range");
  if (!is_mean_zero(field)) {
    log_warning("riesz: input is not mean-zero; projecting");
    return apply_multiplier(project_mean_zero(field), multipliers::riesz(j));
  }
  return apply_multiplier(field, multipliers::riesz(j));
}

}  // namespace roughlab
