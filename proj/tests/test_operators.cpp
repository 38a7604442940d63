#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "roughlab/drift.hpp"
#include "roughlab/error.hpp"
#include "roughlab/field_ops.hpp"
#include "roughlab/heat.hpp"
#include "roughlab/log.hpp"
#include "roughlab/norms.hpp"
#include "roughlab/operators.hpp"
#include "roughlab/spectral.hpp"
#include "support.hpp"

using namespace roughlab;
using roughlab::testing::gaussian;
using roughlab::testing::max_abs_diff;
using roughlab::testing::random_field;

namespace {
constexpr double pi = std::numbers::pi;

SphereKernel sign1(int n) { return sign_kernel(n, component_axis(n, 0, 0.0)); }

std::vector<SphereKernel> kernel_zoo(int n) {
  return {sign1(n), project_mean_zero(harmonic_kernel(n, component_axis(n, 1 % n, 0.0), {0.7, 0.4, -0.2})),
          project_mean_zero(power_kernel(n, component_axis(n, 0, 0.3), 2.5))};
}

// Signed lattice offset for index i on an N-point axis.
int offset_of(int i, int N) { return i < N / 2 ? i : i - N; }

// Independent brute force of sum_{0 < |m| < N/2} Omega(m/|m|) |m h|^{alpha - n} phi(x - m h) h^n
// for a kernel with exactly zero shell means (no projection needed).
Field brute_force(const Grid& g, const SphereKernel& k, double alpha, const Field& phi) {
  const int n = g.dim(), N = g.points();
  const double h = g.spacing();
  Field out(g);
  const long R2 = static_cast<long>(N / 2) * (N / 2);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Index ix = g.unravel(x);
    double sum = 0.0;
    for (std::size_t y = 0; y < g.size(); ++y) {
      const Index iy = g.unravel(y);
      long m2 = 0;
      Point m{0.0, 0.0, 0.0};
      Index shifted{0, 0, 0};
      for (int d = 0; d < n; ++d) {
        const int o = offset_of(iy[d], N);
        m[d] = o;
        m2 += static_cast<long>(o) * o;
        shifted[d] = ix[d] - o;
      }
      if (m2 == 0 || m2 >= R2) continue;
      const double r = std::sqrt(static_cast<double>(m2));
      const Point sigma{m[0] / r, m[1] / r, m[2] / r};
      sum += k(sigma) * std::pow(r * h, alpha - n) * phi[g.ravel(shifted)];
    }
    out[x] = sum * g.cell_volume();
  }
  return out;
}

// Reflection x_1 -> -x_1 in grid indices.
Field reflect_first(const Field& f) {
  const Grid& g = f.grid();
  Field out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Index ix = g.unravel(i);
    ix[0] = (g.points() - ix[0]) % g.points();
    out[g.ravel(ix)] = f[i];
  }
  return out;
}
}  // namespace

TEST_CASE("tabulated kernel vanishes at the origin and beyond the outer radius") {
  for (int n : {2, 3}) {
    const Grid g(n, 16, 3.0);
    const RoughOperator op(g, project_mean_zero(power_kernel(n, component_axis(n, 0, 0.3), 2.5)), 0.0);
    const Field& t = op.tabulated();
    CHECK(t[0] == 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Index ix = g.unravel(i);
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) r2 += std::pow(offset_of(ix[d], 16), 2);
      if (r2 >= 64.0) CHECK(t[i] == 0.0);
    }
    for (const auto& s : op.shells()) CHECK(std::abs(s.projected_sum) <= 1e-12 * (1.0 + std::abs(s.raw_sum)));
  }
}

TEST_CASE("rough operator rejects alpha outside [0, n-1)") {
  const Grid g(2, 16, 1.0);
  CHECK_THROWS_AS(RoughOperator(g, sign1(2), 1.0), DomainError);
  CHECK_THROWS_AS(RoughOperator(g, sign1(2), -0.1), DomainError);
  CHECK_NOTHROW(RoughOperator(g, sign1(2), 0.99));
}

TEST_CASE("direct summation agrees with the independent brute force") {
  for (int n : {2, 3}) {
    const Grid g(n, n == 2 ? 16 : 8, 2.0);
    for (double alpha : {0.0, 0.5}) {
      // Odd kernels have exactly zero shell sums, so no projection is involved.
      const SphereKernel k = harmonic_kernel(n, component_axis(n, 0, 0.0), {1.0, 0.0, 0.3});
      const RoughOperator op(g, k, alpha, false);
      const Field phi = random_field(g, 17);
      const Field want = brute_force(g, k, alpha, phi);
      const Field got = apply_rough(op, phi, ApplyMethod::direct);
      CHECK(max_abs_diff(got, want) <= 1e-12 * want.max_abs());
    }
  }
}

TEST_CASE("fft path reproduces direct summation on 50 random fields") {
  struct Case {
    int n, N;
  };
  for (Case c : {Case{2, 16}, Case{2, 32}, Case{3, 16}}) {
    const Grid g(c.n, c.N, 5.0);
    const auto zoo = kernel_zoo(c.n);
    for (int trial = 0; trial < 50; ++trial) {
      const RoughOperator op(g, zoo[trial % zoo.size()], trial % 2 ? 0.4 : 0.0);
      const Field phi = random_field(g, 1000 + trial);
      const Field direct = apply_rough(op, phi, ApplyMethod::direct);
      const Field fft = apply_rough(op, phi, ApplyMethod::fft);
      CHECK(max_abs_diff(direct, fft) <= 1e-12 * direct.max_abs());
    }
  }
}

TEST_CASE("direct summation refuses grids above the cost guard") {
  const Grid g(2, 64, 1.0);
  const RoughOperator op(g, sign1(2), 0.0);
  CHECK_THROWS_AS(apply_rough(op, Field(g), ApplyMethod::direct), ConfigurationError);
}

TEST_CASE("mean-zero kernels annihilate constants") {
  for (int n : {2, 3}) {
    const Grid g(n, 16, 4.0);
    Field one(g);
    for (double& v : one.values()) v = 1.0;
    for (const SphereKernel& k : kernel_zoo(n)) {
      const RoughOperator op(g, k, 0.0);
      CHECK(apply_rough(op, one).max_abs() <= 1e-6);
    }
  }
}

TEST_CASE("shell sums of the projected kernel shrink as the lattice refines") {
  // Without shell projection the raw sums only vanish in the continuum limit.
  const SphereKernel k = project_mean_zero(power_kernel(2, component_axis(2, 0, 0.3), 2.5));
  double prev = INFINITY;
  for (int N : {16, 64, 256}) {
    const RoughOperator op(Grid(2, N, 1.0), k, 0.0, false);
    double worst = 0.0, scale = 0.0;
    for (const auto& s : op.shells()) {
      if (s.lattice_norm2 < (N / 4) * (N / 4)) continue;
      worst = std::max(worst, std::abs(s.raw_sum) / s.count);
    }
    for (double v : op.tabulated().values()) scale = std::max(scale, std::abs(v));
    const double rel = worst / scale;
    CHECK(rel < prev);
    prev = rel;
  }
}

TEST_CASE("sign kernel maps an even Gaussian to an odd field") {
  const Grid g(2, 32, 6.0);
  const RoughOperator op(g, sign1(2), 0.0);
  const Field out = apply_rough(op, gaussian(g, 0.8));
  const Field mirror = reflect_first(out);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(out[i] + mirror[i]));
  CHECK(worst <= 1e-10 * out.max_abs());
  CHECK(out.max_abs() > 0.1);
}

TEST_CASE("degree homogeneity on companion grids") {
  for (int n : {2, 3}) {
    const Grid g(n, n == 2 ? 32 : 16, 8.0);
    const Field phi = gaussian(g, 1.0);
    for (double alpha : {0.0, 0.5}) {
      const SphereKernel k = kernel_zoo(n)[2];
      const Field base = apply_rough(RoughOperator(g, k, alpha), phi);
      const Field dil = resample_dilate(phi, 2.0, 0.0);
      const Field out = apply_rough(RoughOperator(dil.grid(), k, alpha), dil);
      // Same samples, so T(phi_2)(x) = 2^{-alpha} T(phi)(2x) holds index by index.
      for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(out[i] - std::pow(2.0, -alpha) * base[i]) <= 1e-10 * base.max_abs());
    }
  }
}

TEST_CASE("truncation: full range, empty range and annulus differences") {
  for (int n : {2, 3}) {
    const Grid g(n, 16, 4.0);
    const RoughOperator op(g, kernel_zoo(n)[2], n == 2 ? 0.3 : 0.0);
    const Field phi = random_field(g, 5);
    const Field full = apply_rough(op, phi);
    CHECK(max_abs_diff(apply_truncated(op, phi, g.spacing()), full) <= 1e-12 * full.max_abs());
    CHECK(apply_truncated(op, phi, 0.5 * g.box_length()).max_abs() == 0.0);
    CHECK_THROWS_AS(apply_truncated(op, phi, 0.5 * g.spacing()), DomainError);
    CHECK_THROWS_AS(apply_truncated(op, phi, g.box_length()), DomainError);

    const double t1 = 2 * g.spacing(), t2 = 5 * g.spacing();
    const Field a = apply_truncated(op, phi, t1), b = apply_truncated(op, phi, t2);
    for (std::size_t x = 0; x < g.size(); x += 37) {
      const Index ix = g.unravel(x);
      double annulus = 0.0;
      for (std::size_t y = 0; y < g.size(); ++y) {
        const Index iy = g.unravel(y);
        double r2 = 0.0;
        Index shifted{0, 0, 0};
        for (int d = 0; d < n; ++d) {
          const int o = offset_of(iy[d], 16);
          r2 += double(o) * o;
          shifted[d] = ix[d] - o;
        }
        const double r = std::sqrt(r2) * g.spacing();
        if (r >= t1 && r < t2) annulus += op.tabulated()[y] * phi[g.ravel(shifted)];
      }
      annulus *= g.cell_volume();
      CHECK(std::abs((a[x] - b[x]) - annulus) <= 1e-12 * full.max_abs());
    }
  }
}

TEST_CASE("maximal truncation: singleton, monotone in radii, dominates") {
  const Grid g(2, 16, 4.0);
  const RoughOperator op(g, sign1(2), 0.0);
  const Field phi = gaussian(g, 0.7, {0.3, -0.2, 0.0});
  const Field full = apply_rough(op, phi);
  const std::vector<double> just_h{g.spacing()};
  const Field single = maximal_truncation(op, phi, just_h);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(single[i] == doctest::Approx(std::abs(full[i])).epsilon(1e-12));

  const std::vector<double> radii = dyadic_radii(g);
  CHECK(radii.front() == g.spacing());
  CHECK(radii.back() <= 0.5 * g.box_length());
  Field prev = single;
  for (std::size_t k = 2; k <= radii.size(); ++k) {
    const Field cur = maximal_truncation(op, phi, std::span<const double>(radii.data(), k));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(cur[i] >= prev[i]);
    prev = cur;
  }
  for (double t : radii) {
    const Field tr = apply_truncated(op, phi, t);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(prev[i] >= std::abs(tr[i]));
  }
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(prev[i] >= std::abs(full[i]) - 1e-12 * full.max_abs());
  CHECK_THROWS_AS(maximal_truncation(op, phi, std::vector<double>{}), DomainError);
}

TEST_CASE("Hardy-Littlewood maximal function against brute-force ball averages") {
  const Grid g(2, 16, 16.0);
  Field delta(g);
  delta[g.ravel({8, 8, 0})] = 1.0;
  const std::vector<double> radii = maximal_function_radii(g);
  const Field m = hardy_littlewood(delta, radii);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Index ix = g.unravel(x);
    double best = std::abs(delta[x]);
    for (double r : radii) {
      double sum = 0.0;
      int count = 0;
      for (int a = -16; a <= 16; ++a)
        for (int b = -16; b <= 16; ++b) {
          if ((a * a + b * b) * g.spacing() * g.spacing() > r * r * (1 + 1e-12)) continue;
          // Torus offsets: those in [-N/2, N/2) only.
          if (a < -8 || a >= 8 || b < -8 || b >= 8) continue;
          ++count;
          sum += std::abs(delta[g.ravel({ix[0] - a, ix[1] - b, 0})]);
        }
      best = std::max(best, sum / count);
    }
    CHECK(m[x] == doctest::Approx(best).epsilon(1e-12));
  }
  // Decay like cell volume over ball volume at the hot cell's distance.
  for (int d : {2, 4, 6}) {
    const double v = m[g.ravel({8 + d, 8, 0})];
    const double ballv = pi * d * d;
    CHECK(v * ballv > 0.25);
    CHECK(v * ballv < 4.0);
  }
}

TEST_CASE("Hardy-Littlewood: constants and pointwise domination") {
  const Grid g(3, 16, 4.0);
  Field c(g);
  for (double& v : c.values()) v = -1.5;
  const Field mc = hardy_littlewood(c, maximal_function_radii(g));
  for (double v : mc.values()) CHECK(v == doctest::Approx(1.5).epsilon(1e-12));
  const Field f = random_field(g, 8);
  const Field mf = hardy_littlewood(f, maximal_function_radii(g));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(mf[i] >= std::abs(f[i]));
}

TEST_CASE("Riesz transforms: sum of squares, plane wave, energy identity") {
  for (int n : {2, 3}) {
    const Grid g(n, n == 2 ? 32 : 16, 3.0);
    // Odd symbols vanish on Nyquist modes, so the identities hold on fields without them.
    Spectrum s = forward(project_mean_zero(random_field(g, 21)));
    for_each_mode(g, [&](std::size_t flat, const WaveVector& w) {
      if (w.any_nyquist()) s[flat] = 0.0;
    });
    const Field phi = inverse(s);
    Field sum(g);
    double energy = 0.0;
    for (int j = 0; j < n; ++j) {
      const Field rj = riesz(phi, j);
      sum += riesz(rj, j);
      energy += std::pow(lebesgue_norm(rj, 2.0), 2);
    }
    sum += phi;
    CHECK(sum.max_abs() <= 1e-10 * phi.max_abs());
    CHECK(std::sqrt(energy) == doctest::Approx(lebesgue_norm(phi, 2.0)).epsilon(1e-10));

    const double k = 2 * pi / g.box_length();
    const Field wave = Field::sample(g, [&](const Point& x) { return std::cos(k * x[0]); });
    const Field want = Field::sample(g, [&](const Point& x) { return std::sin(k * x[0]); });
    CHECK(max_abs_diff(riesz(wave, 0), want) <= 1e-12);
    CHECK(lebesgue_norm(riesz(wave, 0), 2.0) == doctest::Approx(lebesgue_norm(wave, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("Riesz transform warns and projects non-mean-zero input") {
  const Grid g(2, 16, 1.0);
  std::vector<std::string> seen;
  LogSink old = set_log_sink([&](std::string_view, std::string_view m) { seen.emplace_back(m); });
  Field f = random_field(g, 2);
  for (double& v : f.values()) v += 1.0;
  const Field r = riesz(f, 1);
  set_log_sink(old);
  REQUIRE(seen.size() == 1);
  CHECK(seen[0].find("not mean-zero") != std::string::npos);
  CHECK(max_abs_diff(r, riesz(project_mean_zero(f), 1)) <= 1e-14);
}

TEST_CASE("heat semigroup preserves the mean and contracts L2") {
  const Grid g(2, 32, 4.0);
  const Field f = random_field(g, 4);
  const Field u = heat_convolve(f, 0.1);
  CHECK(u.mean() == doctest::Approx(f.mean()).epsilon(1e-12));
  CHECK(lebesgue_norm(u, 2.0) <= lebesgue_norm(f, 2.0));
  CHECK_THROWS_AS(heat_convolve(f, 0.5 * std::pow(g.spacing(), 2)), ResolutionError);
}

TEST_CASE("heat kernel gradient decay slope") {
  // Two-dimensional r = 2 example over t in [0.01, 1] on an L = 8, N = 128 box.
  const Grid g(2, 128, 8.0);
  const std::vector<double> times = log_time_grid(0.01, 1.0, 24);
  const HeatGradientTable tab = heat_gradient_norm_table(g, 2.0, times);
  CHECK(tab.expected_slope == doctest::Approx(-1.0));
  CHECK(std::abs(tab.slope - tab.expected_slope) <= 0.02 * std::abs(tab.expected_slope));
  for (int n : {2, 3}) {
    for (double r : {1.5, 3.0}) {
      const Grid gg(n, n == 2 ? 128 : 64, n == 2 ? 128.0 : 64.0);
      const std::vector<double> tt = log_time_grid(2.0, 40.0, 16);
      const HeatGradientTable t = heat_gradient_norm_table(gg, r, tt);
      CHECK(std::abs(t.slope - t.expected_slope) <= 0.02 * std::abs(t.expected_slope));
    }
  }
}

TEST_CASE("drift: zero, homogeneity, divergence form and validation") {
  const int n = 2;
  const Grid g(n, 32, 6.0);
  std::vector<RoughOperator> ops, ops_alpha;
  for (int k = 0; k < n; ++k) {
    const SphereKernel kk = project_mean_zero(power_kernel(n, component_axis(n, k, 0.3), 2.5));
    ops.emplace_back(g, kk, 0.0);
    ops_alpha.emplace_back(g, kk, 0.5);
  }
  const Field theta = project_mean_zero(gaussian(g, 0.9, {0.2, 0.1, 0.0}) - 0.5 * gaussian(g, 0.6, {-0.7, 0.3, 0.0}));
  for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) {
    const auto& o = th == Theorem::T3 ? ops_alpha : ops;
    CHECK(drift_term(th, Field(g), o).max_abs() == 0.0);
    const Field d1 = drift_term(th, theta, o), d3 = drift_term(th, 3.0 * theta, o);
    CHECK(max_abs_diff(d3, 9.0 * d1) <= 1e-10 * d3.max_abs());
  }
  const Field div = drift_term(Theorem::T2, theta, ops);
  CHECK(std::abs(div.integral()) <= 1e-10 * lebesgue_norm(div, 1.0));
  CHECK_THROWS_AS(DriftEvaluator(Theorem::T1, {ops[0]}), ConfigurationError);
  CHECK_THROWS_AS(DriftEvaluator(Theorem::T1, ops_alpha), ConfigurationError);
  Field shifted = theta;
  for (double& v : shifted.values()) v += 1.0;
  CHECK_THROWS_AS(drift_term(Theorem::T2, shifted, ops), DomainError);
}
