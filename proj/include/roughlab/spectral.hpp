#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "roughlab/grid.hpp"

namespace roughlab {

/// Frequency of one stored half-complex mode.
struct WaveVector {
  int dim = 2;
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  /// Axis index sits at N/2; odd symbols must vanish there for real output.
  std::array<bool, 3> nyquist{false, false, false};
  /// sum_j k_j^2 in integer lattice units.
  long lattice_norm2 = 0;

  double norm2() const noexcept { return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]; }
  bool is_zero() const noexcept { return lattice_norm2 == 0; }
  bool any_nyquist() const noexcept { return nyquist[0] || nyquist[1] || nyquist[2]; }
};

/// Visits every stored mode in storage order as f(flat, wave_vector).
template <class F>
void for_each_mode(const Grid& grid, F&& f) {
  const int n = grid.dim();
  const int N = grid.points();
  const int last = grid.spectral_last();
  const double k0 = grid.fundamental();
  WaveVector w;
  w.dim = n;
  std::size_t flat = 0;
  auto axis = [&](int d, int k) {
    const int s = (d == n - 1) ? k : (k < N / 2 ? k : k - N);
    w.xi[d] = k0 * s;
    w.nyquist[d] = (k == N / 2);
    return static_cast<long>(s) * s;
  };
  if (n == 2) {
    for (int a = 0; a < N; ++a) {
      const long na = axis(0, a);
      for (int b = 0; b < last; ++b, ++flat) {
        w.lattice_norm2 = na + axis(1, b);
        f(flat, static_cast<const WaveVector&>(w));
      }
    }
  } else {
    for (int a = 0; a < N; ++a) {
      const long na = axis(0, a);
      for (int b = 0; b < N; ++b) {
        const long nb = axis(1, b);
        for (int c = 0; c < last; ++c, ++flat) {
          w.lattice_norm2 = na + nb + axis(2, c);
          f(flat, static_cast<const WaveVector&>(w));
        }
      }
    }
  }
}

enum class ZeroModePolicy { annihilate, identity };

/// Fourier multiplier; the symbol must satisfy symbol(-xi) = conj(symbol(xi)).
struct Multiplier {
  std::function<std::complex<double>(const WaveVector&)> symbol;
  ZeroModePolicy zero_mode = ZeroModePolicy::identity;
  /// Symbol is singular at xi = 0 (negative order).
  bool negative_order = false;
};

/// Forward transform: raw DFT times h^n, so a constant c has zero mode c * L^n.
Spectrum forward(const Field& field);
/// Inverse of forward (raw inverse DFT divided by L^n).
Field inverse(const Spectrum& spectrum);

Spectrum apply(Spectrum spectrum, const Multiplier& m);
Field apply_multiplier(const Field& field, const Multiplier& m);
Multiplier compose(const Multiplier& outer, const Multiplier& inner);

/// sqrt of the physical L^2 norm squared computed from coefficients (Parseval).
double spectral_l2_norm(const Spectrum& spectrum);

/// |mean| <= tol * max|values|.
bool is_mean_zero(const Field& field, double tol = 1e-12);
Field project_mean_zero(const Field& field);

namespace multipliers {
/// i xi_axis, zero on Nyquist modes of that axis.
Multiplier derivative(int axis);
/// |xi|^s; negative s annihilates the zero mode.
Multiplier fractional_laplacian(double s);
/// e^{-t |xi|^2}.
Multiplier heat(double t);
/// -i xi_j / |xi|, zero on Nyquist modes of that axis and at xi = 0.
Multiplier riesz(int axis);
}  // namespace multipliers

std::vector<Field> gradient(const Field& field);
Field gradient_magnitude(const Field& field);

}  // namespace roughlab
