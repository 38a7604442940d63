#include "roughlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "roughlab/error.hpp"

namespace roughlab {

//===----------------------------------------------------------------------===//
// FFTW plan cache
//===----------------------------------------------------------------------===//

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  // Planning is not thread-safe in FFTW; execution with new-array calls is.
  fftw_plan get(int dim, int points, bool is_forward) {
    const auto key = std::make_tuple(dim, points, is_forward);
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    Grid grid(dim, points, 1.0);
    int dims[3] = {points, points, points};
    double* real = fftw_alloc_real(grid.size());
    fftw_complex* cplx = fftw_alloc_complex(grid.spectral_size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = is_forward ? fftw_plan_dft_r2c(dim, dims, real, cplx, flags)
                                : fftw_plan_dft_c2r(dim, dims, cplx, real, flags);
    fftw_free(real);
    fftw_free(cplx);
    if (plan == nullptr) throw NumericalError("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

Spectrum forward(const Field& field) {
  const Grid& g = field.grid();
  Spectrum out(g);
  fftw_plan plan = plan_cache().get(g.dim(), g.points(), true);
  // Out-of-place r2c leaves the input untouched.
  fftw_execute_dft_r2c(plan, const_cast<double*>(field.values().data()),
                       reinterpret_cast<fftw_complex*>(out.coeffs().data()));
  const double scale = g.cell_volume();
  for (auto& c : out.coeffs()) c *= scale;
  return out;
}

Field inverse(const Spectrum& spectrum) {
  const Grid& g = spectrum.grid();
  // c2r overwrites its input.
  std::vector<std::complex<double>> work(spectrum.coeffs().begin(), spectrum.coeffs().end());
  Field out(g);
  fftw_plan plan = plan_cache().get(g.dim(), g.points(), false);
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(work.data()), out.values().data());
  const double scale = 1.0 / g.volume();
  for (double& v : out.values()) v *= scale;
  return out;
}

//===----------------------------------------------------------------------===//
// Multipliers
//===----------------------------------------------------------------------===//

Spectrum apply(Spectrum spectrum, const Multiplier& m) {
  auto coeffs = spectrum.coeffs();
  double scale = 0.0;
  if (m.negative_order && m.zero_mode == ZeroModePolicy::identity)
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  for_each_mode(spectrum.grid(), [&](std::size_t flat, const WaveVector& w) {
    if (w.is_zero()) {
      if (m.zero_mode == ZeroModePolicy::annihilate) {
        coeffs[flat] = 0.0;
      } else if (m.negative_order) {
        if (std::abs(coeffs[flat]) > 1e-12 * scale) throw DomainError("inverse multiplier undefined on constants");
        coeffs[flat] = 0.0;
      } else {
        coeffs[flat] *= m.symbol(w);
      }
      return;
    }
    coeffs[flat] *= m.symbol(w);
  });
  return spectrum;
}

Field apply_multiplier(const Field& field, const Multiplier& m) {
  if (m.negative_order && m.zero_mode == ZeroModePolicy::identity && !is_mean_zero(field))
    throw DomainError("inverse multiplier undefined on constants");
  Spectrum s = forward(field);
  return inverse(apply(std::move(s), m));
}

Multiplier compose(const Multiplier& outer, const Multiplier& inner) {
  Multiplier m;
  m.symbol = [a = outer.symbol, b = inner.symbol](const WaveVector& w) { return a(w) * b(w); };
  const bool kills = outer.zero_mode == ZeroModePolicy::annihilate || inner.zero_mode == ZeroModePolicy::annihilate;
  m.zero_mode = kills ? ZeroModePolicy::annihilate : ZeroModePolicy::identity;
  m.negative_order = outer.negative_order || inner.negative_order;
  return m;
}

double spectral_l2_norm(const Spectrum& spectrum) {
  const Grid& g = spectrum.grid();
  const int last = g.spectral_last();
  const int N = g.points();
  double sum = 0.0;
  auto coeffs = spectrum.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const int k = static_cast<int>(i % static_cast<std::size_t>(last));
    const double weight = (k == 0 || k == N / 2) ? 1.0 : 2.0;
    sum += weight * std::norm(coeffs[i]);
  }
  return std::sqrt(sum / g.volume());
}

bool is_mean_zero(const Field& field, double tol) {
  return std::abs(field.mean()) <= tol * field.max_abs();
}

Field project_mean_zero(const Field& field) {
  Field out = field;
  const double m = field.mean();
  for (double& v : out.values()) v -= m;
  return out;
}

namespace multipliers {

Multiplier derivative(int axis) {
  Multiplier m;
  m.symbol = [axis](const WaveVector& w) -> std::complex<double> {
    if (w.nyquist[axis]) return 0.0;
    return {0.0, w.xi[axis]};
  };
  return m;
}

Multiplier fractional_laplacian(double s) {
  Multiplier m;
  m.symbol = [s](const WaveVector& w) -> std::complex<double> { return std::pow(w.norm2(), 0.5 * s); };
  if (s < 0.0) {
    m.zero_mode = ZeroModePolicy::annihilate;
    m.negative_order = true;
  } else if (s > 0.0) {
    m.zero_mode = ZeroModePolicy::annihilate;
  }
  return m;
}

Multiplier heat(double t) {
  Multiplier m;
  m.symbol = [t](const WaveVector& w) -> std::complex<double> { return std::exp(-t * w.norm2()); };
  return m;
}

Multiplier riesz(int axis) {
  Multiplier m;
  m.symbol = [axis](const WaveVector& w) -> std::complex<double> {
    if (w.nyquist[axis]) return 0.0;
    return {0.0, -w.xi[axis] / std::sqrt(w.norm2())};
  };
  m.zero_mode = ZeroModePolicy::annihilate;
  return m;
}

}  // namespace multipliers

std::vector<Field> gradient(const Field& field) {
  const Spectrum s = forward(field);
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(field.grid().dim()));
  for (int d = 0; d < field.grid().dim(); ++d) out.push_back(inverse(apply(s, multipliers::derivative(d))));
  return out;
}

Field gradient_magnitude(const Field& field) {
  const auto grad = gradient(field);
  Field out(field.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (const auto& g : grad) s += g[i] * g[i];
    out[i] = std::sqrt(s);
  }
  return out;
}

}  // namespace roughlab
